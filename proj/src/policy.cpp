#include "dyadic/policy.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dyadic/profile.hpp"
#include "json.hpp"

namespace dyadic {

std::string_view to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::bottleneck: return "bottleneck";
    case ConflictKind::authority_paradox: return "authority_paradox";
    case ConflictKind::stakeholder_intersection: return "stakeholder_intersection";
  }
  return "bottleneck";
}

std::string_view to_string(ResolutionKind kind) {
  switch (kind) {
    case ResolutionKind::sequential_staging: return "sequential_staging";
    case ResolutionKind::intermediary_insertion: return "intermediary_insertion";
    case ResolutionKind::precommitment_communication: return "precommitment_communication";
  }
  return "sequential_staging";
}

namespace {

void check_references(const std::vector<ObligationEdge>& obligations, const DyadicGraph& graph) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& ob : obligations) ids.insert(ob.id);
  auto need_entity = [&](const ObligationEdge& ob, const std::string& ref, const char* what) {
    if (!graph.find_entity(ref))
      report.push_back({"referential-integrity", ob.id, std::string(what) + " '" + ref + "' is not declared"});
  };
  for (const auto& ob : obligations) {
    need_entity(ob, ob.agent_id, "agent");
    need_entity(ob, ob.patient_id, "patient");
    if (ob.demanded_by) need_entity(ob, *ob.demanded_by, "stakeholder");
    for (const auto& other : ob.excludes) {
      if (!ids.count(other))
        report.push_back({"referential-integrity", ob.id, "excluded obligation '" + other + "' is not declared"});
    }
  }
  if (!report.empty()) throw ValidationError(std::move(report));
}

bool excludes(const ObligationEdge& a, const ObligationEdge& b) {
  return std::find(a.excludes.begin(), a.excludes.end(), b.id) != a.excludes.end();
}

bool is_bottleneck(const ObligationEdge& a, const ObligationEdge& b) {
  if (a.agent_id != b.agent_id) return false;
  const bool opposed = a.action_tag == b.action_tag && a.direction != b.direction;
  return opposed || excludes(a, b) || excludes(b, a);
}

bool is_authority_paradox(const ObligationEdge& a, const ObligationEdge& b) {
  if (a.agent_id != b.agent_id) return false;
  const auto x = a.agency_requirement, y = b.agency_requirement;
  return (x == AgencyRequirement::low && y == AgencyRequirement::high) ||
         (x == AgencyRequirement::high && y == AgencyRequirement::low);
}

bool is_stakeholder_intersection(const ObligationEdge& a, const ObligationEdge& b) {
  return a.agent_id == b.agent_id && a.patient_id == b.patient_id && a.direction != b.direction && a.demanded_by &&
         b.demanded_by && *a.demanded_by != *b.demanded_by;
}

PriorityEntry implied_dyad(const ObligationEdge& ob, const DyadicGraph& graph, const CultureProfile& profile) {
  const auto& agent = *graph.find_entity(ob.agent_id);
  const auto& patient = *graph.find_entity(ob.patient_id);
  return {ob.id, ob.agent_id, ob.patient_id,
          score_dyad(agent.intentionality, patient.vulnerability, 1.0, profile.k_for(ob.action_tag), profile.alpha)};
}

}  // namespace

std::vector<ConflictReport> detect_conflicts(const std::vector<ObligationEdge>& obligations, const DyadicGraph& graph,
                                             const CultureProfile& profile) {
  check_references(obligations, graph);
  const DyadicGraph adjusted = apply_group_adjustments(graph, profile).graph;

  std::vector<ConflictReport> reports;
  for (std::size_t i = 0; i < obligations.size(); ++i) {
    for (std::size_t j = i + 1; j < obligations.size(); ++j) {
      const auto& a = obligations[i];
      const auto& b = obligations[j];
      std::vector<ConflictKind> kinds;
      if (is_bottleneck(a, b)) kinds.push_back(ConflictKind::bottleneck);
      if (is_authority_paradox(a, b)) kinds.push_back(ConflictKind::authority_paradox);
      if (is_stakeholder_intersection(a, b)) kinds.push_back(ConflictKind::stakeholder_intersection);
      for (auto kind : kinds) {
        ConflictReport report;
        report.kind = kind;
        report.obligations = {a.id, b.id};
        report.priority = {implied_dyad(a, adjusted, profile), implied_dyad(b, adjusted, profile)};
        std::sort(report.priority.begin(), report.priority.end(), [](const auto& x, const auto& y) {
          if (x.wrongness != y.wrongness) return x.wrongness > y.wrongness;
          return x.obligation_id < y.obligation_id;
        });
        report.plan = plan_resolution(report, profile);
        reports.push_back(std::move(report));
      }
    }
  }
  return reports;
}

std::vector<ResolutionStep> plan_resolution(const ConflictReport& conflict, const CultureProfile&) {
  std::vector<ResolutionStep> plan;
  ResolutionStep staging;
  staging.kind = ResolutionKind::sequential_staging;
  for (const auto& p : conflict.priority) staging.order.push_back(p.obligation_id);
  plan.push_back(std::move(staging));

  if (conflict.kind != ConflictKind::stakeholder_intersection) {
    ResolutionStep review;
    review.kind = ResolutionKind::intermediary_insertion;
    review.review_node = conflict.priority.empty() ? "review" : "review_" + conflict.priority.front().agent_id;
    review.order = plan.front().order;
    plan.push_back(std::move(review));
  }

  ResolutionStep precommit;
  precommit.kind = ResolutionKind::precommitment_communication;
  if (!conflict.priority.empty()) precommit.target = conflict.priority.back().obligation_id;
  precommit.exogenous_sufficiency = 1.0;
  plan.push_back(std::move(precommit));
  return plan;
}

DyadicGraph apply_precommitment(const DyadicGraph& graph, const ConflictReport& conflict) {
  DyadicGraph out = graph;
  auto step = std::find_if(conflict.plan.begin(), conflict.plan.end(),
                           [](const auto& s) { return s.kind == ResolutionKind::precommitment_communication; });
  if (step == conflict.plan.end()) return out;
  auto entry = std::find_if(conflict.priority.begin(), conflict.priority.end(),
                            [&](const auto& p) { return p.obligation_id == step->target; });
  if (entry == conflict.priority.end()) return out;

  bool touched = false;
  for (auto& edge : out.edges) {
    if (edge.agent_id == entry->agent_id && edge.patient_id == entry->patient_id) {
      edge.exogenous_sufficiency = std::max(edge.exogenous_sufficiency, step->exogenous_sufficiency);
      touched = true;
    }
  }
  if (!touched) {
    std::string tag;
    for (const auto& ob : out.obligations)
      if (ob.id == entry->obligation_id) tag = ob.action_tag;
    HarmEdge deviation;
    deviation.id = entry->obligation_id + ".deviation";
    while (out.find_edge(deviation.id)) deviation.id += "_";
    deviation.agent_id = entry->agent_id;
    deviation.patient_id = entry->patient_id;
    deviation.suffering = out.find_entity(entry->patient_id)->vulnerability;
    deviation.exogenous_sufficiency = step->exogenous_sufficiency;
    deviation.act_category = tag;
    out.edges.push_back(std::move(deviation));
  }
  out.provenance.push_back("precommitment");
  return out;
}

namespace {

std::string export_conflicts_text(const std::vector<ConflictReport>& reports) {
  std::ostringstream out;
  out << "conflicts " << reports.size() << "\n";
  int n = 0;
  for (const auto& r : reports) {
    out << "conflict " << ++n << " kind=" << to_string(r.kind) << " obligations=";
    for (std::size_t i = 0; i < r.obligations.size(); ++i) out << (i ? "," : "") << r.obligations[i];
    out << "\n";
    int rank = 0;
    for (const auto& p : r.priority) {
      out << "  priority " << ++rank << " " << p.obligation_id << " agent=" << p.agent_id << " patient=" << p.patient_id
          << " W=" << format_export(p.wrongness) << "\n";
    }
    int step_no = 0;
    for (const auto& s : r.plan) {
      out << "  plan " << ++step_no << " " << to_string(s.kind);
      switch (s.kind) {
        case ResolutionKind::sequential_staging:
          out << " order=";
          for (std::size_t i = 0; i < s.order.size(); ++i) out << (i ? "," : "") << s.order[i];
          break;
        case ResolutionKind::intermediary_insertion:
          out << " node=" << s.review_node << " absorbs=";
          for (std::size_t i = 0; i < s.order.size(); ++i) out << (i ? "," : "") << s.order[i];
          break;
        case ResolutionKind::precommitment_communication:
          out << " target=" << s.target << " exogenous=" << format_export(s.exogenous_sufficiency);
          break;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string export_conflicts_json(const std::vector<ConflictReport>& reports) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json c;
    c["kind"] = to_string(r.kind);
    c["obligations"] = r.obligations;
    c["priority"] = ordered_json::array();
    for (const auto& p : r.priority) {
      c["priority"].push_back(
          {{"obligation_id", p.obligation_id}, {"agent_id", p.agent_id}, {"patient_id", p.patient_id},
           {"wrongness", p.wrongness}});
    }
    c["plan"] = ordered_json::array();
    for (const auto& s : r.plan) {
      ordered_json step;
      step["step"] = to_string(s.kind);
      switch (s.kind) {
        case ResolutionKind::sequential_staging: step["order"] = s.order; break;
        case ResolutionKind::intermediary_insertion:
          step["node"] = s.review_node;
          step["absorbs"] = s.order;
          break;
        case ResolutionKind::precommitment_communication:
          step["target"] = s.target;
          step["exogenous_sufficiency"] = s.exogenous_sufficiency;
          break;
      }
      c["plan"].push_back(std::move(step));
    }
    doc.push_back(std::move(c));
  }
  return ordered_json{{"conflicts", std::move(doc)}}.dump(2) + "\n";
}

}  // namespace

std::string export_conflicts(const std::vector<ConflictReport>& reports, ExportFormat format) {
  return format == ExportFormat::json ? export_conflicts_json(reports) : export_conflicts_text(reports);
}

}  // namespace dyadic
