#include "dyadic/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace dyadic {

const EntityNode* DyadicGraph::find_entity(std::string_view id) const {
  auto it = entities.find(std::string(id));
  return it == entities.end() ? nullptr : &it->second;
}

EntityNode* DyadicGraph::find_entity(std::string_view id) {
  auto it = entities.find(std::string(id));
  return it == entities.end() ? nullptr : &it->second;
}

const HarmEdge* DyadicGraph::find_edge(std::string_view id) const {
  auto it = std::find_if(edges.begin(), edges.end(), [&](const HarmEdge& e) { return e.id == id; });
  return it == edges.end() ? nullptr : &*it;
}

HarmEdge* DyadicGraph::find_edge(std::string_view id) {
  auto it = std::find_if(edges.begin(), edges.end(), [&](const HarmEdge& e) { return e.id == id; });
  return it == edges.end() ? nullptr : &*it;
}

void DyadicGraph::add_entity(EntityNode node) {
  auto id = node.id;
  entities.insert_or_assign(std::move(id), std::move(node));
}

double CultureProfile::k_for(const std::string& category) const {
  auto it = k_map.find(category);
  return it == k_map.end() ? 1.0 : it->second;
}

namespace {

std::string describe(const ValidationReport& report) {
  std::string out = "validation failed";
  for (const auto& v : report) out += "; " + v.invariant + " (" + v.id + "): " + v.message;
  return out;
}

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

class Checker {
 public:
  explicit Checker(ValidationReport& out) : out_(out) {}

  void unit(double value, const std::string& id, const char* field) {
    if (!in_unit(value)) add("range", id, std::string(field) + " = " + format_scalar(value) + " outside [0,1]");
  }

  void add(std::string invariant, std::string id, std::string message) {
    out_.push_back({std::move(invariant), std::move(id), std::move(message)});
  }

 private:
  ValidationReport& out_;
};

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

ValidationReport validate_graph(const DyadicGraph& graph) {
  ValidationReport report;
  Checker check(report);

  for (const auto& [key, node] : graph.entities) {
    if (key != node.id) check.add("entity-id", key, "map key does not match entity id '" + node.id + "'");
    check.unit(node.intentionality, node.id, "intentionality");
    check.unit(node.vulnerability, node.id, "vulnerability");
    check.unit(node.entitativity, node.id, "entitativity");
    if (node.group_size < 1) check.add("range", node.id, "group_size must be >= 1");

    switch (node.kind) {
      case EntityKind::individual:
        if (node.group_size != 1 || !node.members.empty())
          check.add("individual-shape", node.id, "individuals have group_size 1 and no members");
        break;
      case EntityKind::group:
        if (node.members.empty()) check.add("group-members", node.id, "group declares no members");
        [[fallthrough]];
      case EntityKind::institution:
        if (node.group_size < static_cast<int>(node.members.size()))
          check.add("group-size", node.id, "group_size smaller than member count");
        break;
      case EntityKind::diffuse:
      case EntityKind::system:
      case EntityKind::supernatural:
        if (!node.latent && !node.synthetic)
          check.add("latent-kind", node.id,
                    std::string(to_string(node.kind)) + " entities must be latent or synthetic");
        if (!node.members.empty()) check.add("members", node.id, "only groups and institutions have members");
        break;
    }

    std::set<std::string> seen;
    for (const auto& m : node.members) {
      if (!seen.insert(m).second) check.add("members", node.id, "duplicate member '" + m + "'");
      if (m == node.id) {
        check.add("members", node.id, "entity lists itself as a member");
        continue;
      }
      const auto* member = graph.find_entity(m);
      if (!member) {
        check.add("referential-integrity", node.id, "member '" + m + "' is not declared");
      } else if (member->kind != EntityKind::individual) {
        check.add("members", node.id, "member '" + m + "' is not an individual");
      }
    }
  }

  std::set<std::string> edge_ids;
  for (const auto& edge : graph.edges) {
    if (!edge_ids.insert(edge.id).second) check.add("duplicate-id", edge.id, "edge id declared twice");
    for (const auto* endpoint : {&edge.agent_id, &edge.patient_id}) {
      if (*endpoint && !graph.find_entity(**endpoint))
        check.add("referential-integrity", edge.id, "endpoint '" + **endpoint + "' is not declared");
    }
    check.unit(edge.causality, edge.id, "causality");
    check.unit(edge.suffering, edge.id, "suffering");
    check.unit(edge.exogenous_sufficiency, edge.id, "exogenous");
    if (!(std::isfinite(edge.valence) && edge.valence >= -1.0 && edge.valence <= 1.0))
      check.add("range", edge.id, "valence = " + format_scalar(edge.valence) + " outside [-1,1]");
  }

  if (graph.chain_order) {
    const auto& chain = *graph.chain_order;
    if (chain.empty()) check.add("chain", "chain", "chain declares no edges");
    std::set<std::string> seen;
    const HarmEdge* previous = nullptr;
    for (const auto& id : chain) {
      const auto* edge = graph.find_edge(id);
      if (!seen.insert(id).second) check.add("chain", id, "edge appears twice in chain");
      if (!edge) {
        check.add("referential-integrity", id, "chain names an undeclared edge");
        previous = nullptr;
        continue;
      }
      if (!edge->agent_id || !edge->patient_id) check.add("chain", id, "chain edges need both endpoints");
      if (previous && previous->patient_id != edge->agent_id)
        check.add("chain", id, "agent does not match the patient of edge '" + previous->id + "'");
      previous = edge;
    }
  }

  std::set<std::string> obligation_ids;
  for (const auto& ob : graph.obligations) {
    if (!obligation_ids.insert(ob.id).second) check.add("duplicate-id", ob.id, "obligation id declared twice");
  }
  for (const auto& ob : graph.obligations) {
    if (!graph.find_entity(ob.agent_id))
      check.add("referential-integrity", ob.id, "agent '" + ob.agent_id + "' is not declared");
    if (!graph.find_entity(ob.patient_id))
      check.add("referential-integrity", ob.id, "patient '" + ob.patient_id + "' is not declared");
    if (ob.demanded_by && !graph.find_entity(*ob.demanded_by))
      check.add("referential-integrity", ob.id, "stakeholder '" + *ob.demanded_by + "' is not declared");
    for (const auto& other : ob.excludes) {
      if (!obligation_ids.count(other))
        check.add("referential-integrity", ob.id, "excluded obligation '" + other + "' is not declared");
    }
  }
  return report;
}

ValidationReport validate_profile(const CultureProfile& profile) {
  ValidationReport report;
  Checker check(report);
  for (const auto& [category, k] : profile.k_map) {
    if (!(std::isfinite(k) && k > 0.0)) check.add("range", "k_map." + category, "k must be positive");
  }
  if (!(std::isfinite(profile.alpha) && profile.alpha > 0.0)) check.add("range", "alpha", "alpha must be positive");
  check.unit(profile.sigma_t, "sigma_t", "sigma_t");
  check.unit(profile.delta_p_ingroup, "delta_p_ingroup", "delta_p_ingroup");
  check.unit(profile.delta_a_outgroup, "delta_a_outgroup", "delta_a_outgroup");
  check.unit(profile.knobe_gain, "knobe_gain", "knobe_gain");
  check.unit(profile.default_diffuse_p, "default_diffuse_p", "default_diffuse_p");
  check.unit(profile.default_system_a, "default_system_a", "default_system_a");
  check.unit(profile.tool_threshold, "tool_threshold", "tool_threshold");
  check.unit(profile.tragedy_threshold, "tragedy_threshold", "tragedy_threshold");
  if (!(std::isfinite(profile.tie_epsilon) && profile.tie_epsilon > 0.0))
    check.add("range", "tie_epsilon", "tie_epsilon must be positive");
  if (!(std::isfinite(profile.bayes_background) && profile.bayes_background >= 0.0 && profile.bayes_background < 1.0))
    check.add("range", "bayes_background", "bayes_background must lie in [0,1)");
  if (profile.bayes_grid.empty()) check.add("range", "bayes_grid", "bayes_grid is empty");
  for (std::size_t i = 0; i < profile.bayes_grid.size(); ++i) {
    check.unit(profile.bayes_grid[i], "bayes_grid", "bayes_grid level");
    if (i > 0 && !(profile.bayes_grid[i] > profile.bayes_grid[i - 1]))
      check.add("range", "bayes_grid", "bayes_grid must be strictly increasing");
  }
  return report;
}

namespace {

std::string join_sorted(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += detail::quote(items[i]);
  }
  return out + "]";
}

std::string join_ordered(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += detail::quote(items[i]);
  }
  return out + "]";
}

std::string opt(const std::optional<std::string>& value) { return value ? detail::quote(*value) : "-"; }

}  // namespace

std::string snapshot(const DyadicGraph& graph) {
  std::ostringstream out;
  out << "scenario " << detail::quote(graph.name) << " systemic=" << graph.systemic_agents_admissible << "\n";
  for (const auto& [id, node] : graph.entities) {
    out << "entity " << detail::quote(id) << " kind=" << to_string(node.kind)
        << " a=" << format_scalar(node.intentionality) << " p=" << format_scalar(node.vulnerability)
        << " n=" << node.group_size << " e=" << format_scalar(node.entitativity)
        << " members=" << join_sorted(node.members) << " latent=" << node.latent
        << " synthetic=" << node.synthetic << " lock=" << to_string(node.lock)
        << " community=" << opt(node.community) << "\n";
  }
  std::vector<const HarmEdge*> edges;
  for (const auto& e : graph.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const HarmEdge* a, const HarmEdge* b) { return a->id < b->id; });
  for (const auto* e : edges) {
    out << "edge " << detail::quote(e->id) << " agent=" << opt(e->agent_id) << " patient=" << opt(e->patient_id)
        << " h=" << format_scalar(e->causality) << " v=" << format_scalar(e->valence)
        << " s=" << format_scalar(e->suffering) << " x=" << format_scalar(e->exogenous_sufficiency)
        << " category=" << detail::quote(e->act_category) << "\n";
  }
  if (graph.chain_order) out << "chain " << join_ordered(*graph.chain_order) << "\n";
  std::vector<const ObligationEdge*> obligations;
  for (const auto& o : graph.obligations) obligations.push_back(&o);
  std::sort(obligations.begin(), obligations.end(),
            [](const ObligationEdge* a, const ObligationEdge* b) { return a->id < b->id; });
  for (const auto* o : obligations) {
    out << "obligation " << detail::quote(o->id) << " policy=" << detail::quote(o->policy_id)
        << " agent=" << detail::quote(o->agent_id) << " patient=" << detail::quote(o->patient_id)
        << " direction=" << to_string(o->direction) << " tag=" << detail::quote(o->action_tag)
        << " demanded_by=" << opt(o->demanded_by) << " agency=" << to_string(o->agency_requirement)
        << " excludes=" << join_sorted(o->excludes) << "\n";
  }
  out << "provenance " << join_ordered(graph.provenance) << "\n";
  return out.str();
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::individual: return "individual";
    case EntityKind::group: return "group";
    case EntityKind::institution: return "institution";
    case EntityKind::diffuse: return "diffuse";
    case EntityKind::system: return "system";
    case EntityKind::supernatural: return "supernatural";
  }
  return "individual";
}

std::string_view to_string(RoleLock lock) {
  switch (lock) {
    case RoleLock::none: return "none";
    case RoleLock::locked_agent: return "locked_agent";
    case RoleLock::locked_patient: return "locked_patient";
  }
  return "none";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::promote ? "promote" : "prevent";
}

std::string_view to_string(AgencyRequirement agency) {
  switch (agency) {
    case AgencyRequirement::none: return "none";
    case AgencyRequirement::low: return "low";
    case AgencyRequirement::high: return "high";
  }
  return "none";
}

std::string_view to_string(InferenceMode mode) {
  return mode == InferenceMode::heuristic ? "heuristic" : "bayesian";
}

std::string_view to_string(GroupAggregation aggregation) {
  return aggregation == GroupAggregation::max ? "max" : "mean";
}

std::string_view to_string(Classification classification) {
  switch (classification) {
    case Classification::wrong: return "wrong";
    case Classification::tragedy: return "tragedy";
    case Classification::neutral: return "neutral";
    case Classification::complex: return "complex";
  }
  return "neutral";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  for (auto k : {EntityKind::individual, EntityKind::group, EntityKind::institution, EntityKind::diffuse,
                 EntityKind::system, EntityKind::supernatural}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<RoleLock> parse_role_lock(std::string_view text) {
  for (auto l : {RoleLock::none, RoleLock::locked_agent, RoleLock::locked_patient}) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "promote") return Direction::promote;
  if (text == "prevent") return Direction::prevent;
  return std::nullopt;
}

std::optional<AgencyRequirement> parse_agency(std::string_view text) {
  for (auto a : {AgencyRequirement::none, AgencyRequirement::low, AgencyRequirement::high}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<InferenceMode> parse_inference_mode(std::string_view text) {
  if (text == "heuristic") return InferenceMode::heuristic;
  if (text == "bayesian") return InferenceMode::bayesian;
  return std::nullopt;
}

std::optional<GroupAggregation> parse_group_aggregation(std::string_view text) {
  if (text == "max") return GroupAggregation::max;
  if (text == "mean") return GroupAggregation::mean;
  return std::nullopt;
}

namespace {

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string out(buf);
  // "-0.000000" and "0.000000" denote the same quantized value.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

}  // namespace

std::string format_scalar(double value) { return format_fixed(value, 6); }
std::string format_export(double value) { return format_fixed(value, 9); }

}  // namespace dyadic
