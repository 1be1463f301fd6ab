#include "dyadic/engine.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "dyadic/normalize.hpp"
#include "dyadic/operators.hpp"
#include "dyadic/profile.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace dyadic {

double score_dyad(double a, double p, double h, double k, double alpha) { return k * std::pow(a * p * h, alpha); }

namespace {

void append(std::vector<TraceStep>& into, std::vector<TraceStep>&& steps) {
  into.insert(into.end(), std::make_move_iterator(steps.begin()), std::make_move_iterator(steps.end()));
}

std::string ap_text(double a, double p) { return "A=" + format_scalar(a) + " P=" + format_scalar(p); }

class DyadScorer {
 public:
  DyadScorer(const DyadicGraph& graph, const CultureProfile& profile, std::vector<TraceStep>& trace)
      : graph_(graph), profile_(profile), trace_(trace) {}

  DyadRecord score(const HarmEdge& edge, int stage) {
    const auto& agent = *graph_.find_entity(*edge.agent_id);
    const auto& patient = *graph_.find_entity(*edge.patient_id);

    DyadRecord r;
    r.edge_id = edge.id;
    r.agent_id = agent.id;
    r.patient_id = patient.id;
    r.h = edge.causality;
    r.s = edge.suffering;
    r.stage = stage;

    if (agent.id == patient.id) {
      trace_.push_back({"scoring", edge.id, "agent=" + agent.id, "patient=" + patient.id,
                        "self-directed action; scored as an ordinary dyad"});
    }

    const double a_inferred = infer(edge, agent.intentionality);

    // Appraisal: a tragedy hands the agent slot to the system.
    const auto appraisal = appraise_counterfactual(edge, profile_.tragedy_threshold);
    const bool tragedy = appraisal.classification == AppraisalClass::tragedy;
    double a_appraised = a_inferred;
    double agent_p = agent.vulnerability;
    RoleLock agent_lock = agent.lock;
    if (tragedy) {
      a_appraised = profile_.default_system_a;
      agent_p = 0.0;
      agent_lock = RoleLock::none;
      r.agent_id = *appraisal.reassigned_agent;
      trace_.push_back({"counterfactual_appraisal", edge.id, "agent=" + agent.id + " A=" + format_scalar(a_inferred),
                        "agent=" + r.agent_id + " A=" + format_scalar(a_appraised),
                        "do(A=0): outcome exogenously sufficient (" + format_scalar(edge.exogenous_sufficiency) +
                            " >= " + format_scalar(profile_.tragedy_threshold) + "); tragedy, agent shifted to '" +
                            r.agent_id + "'"});
    } else {
      trace_.push_back({"counterfactual_appraisal", edge.id, "agent=" + agent.id + " A=" + format_scalar(a_inferred),
                        "agent=" + agent.id + " A=" + format_scalar(a_inferred),
                        "do(A=0): outcome not exogenously sufficient (" + format_scalar(edge.exogenous_sufficiency) +
                            " < " + format_scalar(profile_.tragedy_threshold) + "); caused by the agent's mind"});
    }

    const auto agent_side = typecast(a_appraised, agent_p, profile_.sigma_t, agent_lock, profile_.tie_epsilon);
    const auto patient_side = typecast(patient.intentionality, patient.vulnerability, profile_.sigma_t, patient.lock,
                                       profile_.tie_epsilon);
    const bool complex = agent_side.complexity_flag || patient_side.complexity_flag;
    r.a_final = agent_side.intentionality_out;
    r.p_final = patient_side.vulnerability_out;
    trace_.push_back({"typecasting", edge.id,
                      "agent " + ap_text(a_appraised, agent_p) + "; patient " +
                          ap_text(patient.intentionality, patient.vulnerability),
                      "agent " + ap_text(agent_side.intentionality_out, agent_side.vulnerability_out) + "; patient " +
                          ap_text(patient_side.intentionality_out, patient_side.vulnerability_out),
                      typecast_note(agent_side, patient_side)});

    const double k = profile_.k_for(edge.act_category);
    double attenuation = 1.0;
    if (!tragedy && agent.kind == EntityKind::institution && agent.members.empty()) {
      attenuation = profile_.default_system_a;
    }
    r.wrongness = score_dyad(r.a_final, r.p_final, r.h, k, profile_.alpha) * attenuation;

    r.agent_n_eff = !tragedy && agent.kind == EntityKind::group
                        ? effective_group_size(agent.group_size, agent.entitativity)
                        : 1.0;
    r.patient_n_eff =
        patient.kind == EntityKind::group ? effective_group_size(patient.group_size, patient.entitativity) : 1.0;
    r.agent_attributed = r.a_final / r.agent_n_eff;
    r.patient_attributed = r.p_final / r.patient_n_eff;
    r.member_wrongness = score_dyad(r.agent_attributed, r.patient_attributed, r.h, k, profile_.alpha) * attenuation;

    if (r.wrongness == 0.0) {
      r.classification = Classification::neutral;
    } else if (tragedy) {
      r.classification = Classification::tragedy;
    } else if (complex) {
      r.classification = Classification::complex;
    } else {
      r.classification = Classification::wrong;
    }

    std::string note = "k=" + format_scalar(k) + " alpha=" + format_scalar(profile_.alpha);
    if (attenuation != 1.0) note += "; ungrounded institution, attenuated by " + format_scalar(attenuation);
    if (r.agent_n_eff != 1.0 || r.patient_n_eff != 1.0) {
      note += "; per-member A=" + format_scalar(r.agent_attributed) + " P=" + format_scalar(r.patient_attributed) +
              " W=" + format_scalar(r.member_wrongness);
    }
    trace_.push_back({"scoring", edge.id, ap_text(r.a_final, r.p_final) + " H=" + format_scalar(r.h),
                      "W=" + format_scalar(r.wrongness) + " class=" + std::string(to_string(r.classification)), note});
    return r;
  }

 private:
  double infer(const HarmEdge& edge, double prior_a) {
    double a = prior_a;
    std::string note;
    if (profile_.inference_mode == InferenceMode::heuristic) {
      a = infer_intent_heuristic(prior_a, edge.suffering, edge.valence, profile_.knobe_gain);
      note = edge.valence < 0.0 ? "heuristic: negative valence back-fills intent (gain " +
                                      format_scalar(profile_.knobe_gain) + ")"
                                : "heuristic: non-negative valence, no intent boost";
    } else if (edge.valence < 0.0 && edge.suffering > 0.0) {
      try {
        const auto prior = prior_from_point(profile_.bayes_grid, prior_a);
        a = infer_intent_bayes(prior, true, edge.causality, profile_.bayes_background).point_estimate;
        note = "bayesian: suffering observed, posterior mean over grid";
      } catch (const DegenerateEvidence&) {
        note = "bayesian: evidence has zero likelihood under the prior; prior kept";
      }
    } else {
      note = "bayesian: no suffering observed, prior kept";
    }
    trace_.push_back({"intent_inference", edge.id, "A=" + format_scalar(prior_a), "A=" + format_scalar(a), note});
    return a;
  }

  static std::string typecast_note(const TypecastResult& agent, const TypecastResult& patient) {
    auto side = [](const TypecastResult& t) -> std::string {
      if (t.complexity_flag) return "flicker (complex)";
      if (t.suppressed_dimension == SuppressedDimension::none) return "unconstrained";
      return std::string("suppressed ") + (t.suppressed_dimension == SuppressedDimension::agent_side ? "A" : "P");
    };
    return "agent " + side(agent) + "; patient " + side(patient);
  }

  const DyadicGraph& graph_;
  const CultureProfile& profile_;
  std::vector<TraceStep>& trace_;
};

}  // namespace

Judgment judge(const DyadicGraph& graph, const CultureProfile& profile) {
  auto report = validate_graph(graph);
  auto profile_report = validate_profile(profile);
  report.insert(report.end(), profile_report.begin(), profile_report.end());
  if (!report.empty()) throw ValidationError(std::move(report));

  Judgment j;
  j.scenario = graph.name;
  j.profile = profile.name;

  auto adjusted = apply_group_adjustments(graph, profile);
  append(j.trace, std::move(adjusted.trace));
  auto completed = complete_dyad(adjusted.graph, profile);
  append(j.trace, std::move(completed.trace));
  auto collapsed = collapse_collectives(completed.graph, profile);
  append(j.trace, std::move(collapsed.trace));

  DyadicGraph g = std::move(collapsed.graph);
  std::map<std::string, int> stage_of;
  if (g.chain_order) {
    auto chain = decompose_chain(g, profile);
    append(j.trace, std::move(chain.trace));
    for (const auto& d : chain.decomposition.dyads) stage_of[d.edge.id] = d.stage;
    g = std::move(chain.graph);
  }

  DyadScorer scorer(g, profile, j.trace);
  for (const auto& edge : g.edges) {
    if (!is_scored(edge)) {
      j.trace.push_back({"scoring", edge.id, "agent=?", "agent=?", "unscored: no agent and no suffering observed"});
      continue;
    }
    auto it = stage_of.find(edge.id);
    j.dyad_records.push_back(scorer.score(edge, it == stage_of.end() ? 0 : it->second));
  }
  for (const auto& r : j.dyad_records) j.total_wrongness += r.wrongness;
  return j;
}

std::string explain(const Judgment& judgment) {
  std::ostringstream out;
  out << "Explanation for scenario " << detail::quote(judgment.scenario) << " under profile "
      << detail::quote(judgment.profile) << "\n";
  int n = 0;
  for (const auto& step : judgment.trace) {
    out << "  " << ++n << ". [" << step.pass_name << "] " << step.target << ": " << step.before << " -> "
        << step.after << "\n";
    if (!step.note.empty()) out << "       " << step.note << "\n";
  }
  return out.str();
}

namespace {

std::string export_text(const Judgment& j, bool include_trace) {
  std::ostringstream out;
  out << "judgment " << detail::quote(j.scenario) << " profile " << detail::quote(j.profile) << "\n";
  for (const auto& r : j.dyad_records) {
    out << "dyad " << r.edge_id << " agent=" << r.agent_id << " patient=" << r.patient_id << " stage=" << r.stage
        << " class=" << to_string(r.classification) << " A=" << format_export(r.a_final)
        << " P=" << format_export(r.p_final) << " H=" << format_export(r.h) << " S=" << format_export(r.s)
        << " W=" << format_export(r.wrongness) << " n_eff_agent=" << format_export(r.agent_n_eff)
        << " attributed_A=" << format_export(r.agent_attributed) << " n_eff_patient=" << format_export(r.patient_n_eff)
        << " attributed_P=" << format_export(r.patient_attributed) << " member_W=" << format_export(r.member_wrongness)
        << "\n";
  }
  out << "total W=" << format_export(j.total_wrongness) << " dyads=" << j.dyad_records.size() << "\n";
  if (include_trace) {
    out << "trace steps=" << j.trace.size() << "\n";
    for (std::size_t i = 0; i < j.trace.size(); ++i) {
      const auto& s = j.trace[i];
      out << "  " << i + 1 << " " << s.pass_name << " " << s.target << " | " << s.before << " | " << s.after << " | "
          << s.note << "\n";
    }
  }
  return out.str();
}

std::string export_json(const Judgment& j, bool include_trace) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["scenario"] = j.scenario;
  doc["profile"] = j.profile;
  doc["dyads"] = ordered_json::array();
  for (const auto& r : j.dyad_records) {
    ordered_json d;
    d["edge_id"] = r.edge_id;
    d["agent_id"] = r.agent_id;
    d["patient_id"] = r.patient_id;
    d["stage"] = r.stage;
    d["classification"] = to_string(r.classification);
    d["a_final"] = r.a_final;
    d["p_final"] = r.p_final;
    d["h"] = r.h;
    d["s"] = r.s;
    d["wrongness"] = r.wrongness;
    d["agent_n_eff"] = r.agent_n_eff;
    d["agent_attributed"] = r.agent_attributed;
    d["patient_n_eff"] = r.patient_n_eff;
    d["patient_attributed"] = r.patient_attributed;
    d["member_wrongness"] = r.member_wrongness;
    doc["dyads"].push_back(std::move(d));
  }
  doc["total_wrongness"] = j.total_wrongness;
  if (include_trace) {
    doc["trace"] = ordered_json::array();
    for (const auto& s : j.trace) {
      doc["trace"].push_back(
          {{"pass", s.pass_name}, {"target", s.target}, {"before", s.before}, {"after", s.after}, {"note", s.note}});
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace

std::string export_judgment(const Judgment& judgment, const ExportOptions& options) {
  return options.format == ExportFormat::json ? export_json(judgment, options.include_trace)
                                              : export_text(judgment, options.include_trace);
}

}  // namespace dyadic
