#include "reference_judge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace dyadic::testing {

namespace {

double agg(const std::vector<double>& v, GroupAggregation how) {
  double best = v[0];
  double sum = 0.0;
  for (double x : v) {
    best = std::max(best, x);
    sum += x;
  }
  return how == GroupAggregation::max ? best : sum / static_cast<double>(v.size());
}

double mean(const std::vector<double>& v) { return agg(v, GroupAggregation::mean); }

std::string synthetic(std::map<std::string, EntityNode>& ents, const std::string& base, EntityKind kind, double a,
                      double p) {
  for (int k = 1;; ++k) {
    std::string id = k == 1 ? base : base + "_" + std::to_string(k);
    auto it = ents.find(id);
    if (it != ents.end()) {
      if (it->second.synthetic && it->second.kind == kind) return id;
      continue;
    }
    EntityNode n;
    n.id = id;
    n.kind = kind;
    n.intentionality = a;
    n.vulnerability = p;
    n.synthetic = true;
    ents[id] = n;
    return id;
  }
}

std::optional<std::string> latent(const std::map<std::string, EntityNode>& ents, bool by_p,
                                  const std::optional<std::string>& skip) {
  std::optional<std::string> best;
  double best_v = -1.0;
  for (const auto& [id, n] : ents) {
    if (!n.latent || (skip && *skip == id)) continue;
    double v = by_p ? n.vulnerability : n.intentionality;
    if (v > best_v) {
      best_v = v;
      best = id;
    }
  }
  return best;
}

double posterior_mean(const std::vector<double>& grid, double a, double h, double bg, bool& degenerate) {
  std::vector<double> prior(grid.size(), 0.0);
  if (a <= grid.front()) {
    prior.front() = 1.0;
  } else if (a >= grid.back()) {
    prior.back() = 1.0;
  } else {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (grid[i] <= a && a < grid[i + 1]) {
        double w = (a - grid[i]) / (grid[i + 1] - grid[i]);
        prior[i] = 1.0 - w;
        prior[i + 1] = w;
        break;
      }
    }
  }
  double z = 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double joint = prior[i] * (bg + (1.0 - bg) * grid[i] * h);
    z += joint;
    m += joint * grid[i];
  }
  degenerate = !(z > 0.0);
  if (degenerate) return a;
  return std::clamp(m / z, grid.front(), grid.back());
}

struct Cast {
  double a, p;
  bool flag;
};

Cast cast(double a, double p, double sigma, RoleLock lock, double eps) {
  double tau = 1.0 - sigma;
  if (a * p <= tau) return {a, p, false};
  if (lock == RoleLock::none && std::fabs(a - p) < eps) return {a, p, true};
  bool cut_p;
  if (lock == RoleLock::locked_agent) cut_p = true;
  else if (lock == RoleLock::locked_patient) cut_p = false;
  else cut_p = p < a;
  if (cut_p) return {a, tau / a, false};
  return {tau / p, p, false};
}

}  // namespace

Judgment reference_judge(const DyadicGraph& graph, const CultureProfile& prof) {
  auto ents = graph.entities;
  auto edges = graph.edges;

  // perception shifts
  for (auto& [id, n] : ents) {
    if (!n.community || n.community->empty()) continue;
    if (prof.observer_community && *prof.observer_community == *n.community) {
      if (n.vulnerability > 0.0) n.vulnerability = std::min(1.0, n.vulnerability + prof.delta_p_ingroup);
    } else {
      n.intentionality = std::min(1.0, n.intentionality + prof.delta_a_outgroup);
    }
  }

  // closure
  for (auto& e : edges) {
    if (!e.agent_id && !(e.suffering > 0.0)) continue;
    if (!e.patient_id) {
      auto l = latent(ents, true, e.agent_id);
      e.patient_id = l ? *l : synthetic(ents, "society", EntityKind::diffuse, 0.0, prof.default_diffuse_p);
    }
    if (!e.agent_id) {
      auto l = latent(ents, false, e.patient_id);
      if (l) e.agent_id = *l;
      else if (graph.systemic_agents_admissible)
        e.agent_id = synthetic(ents, "system", EntityKind::system, prof.default_system_a, 0.0);
      else
        e.agent_id = synthetic(ents, "supernatural", EntityKind::supernatural, prof.default_system_a, 0.0);
    }
  }

  // collectives
  const auto before_collapse = ents;
  for (auto& [id, n] : ents) {
    if (n.kind != EntityKind::group && n.kind != EntityKind::institution) continue;
    bool as_agent = false, as_patient = false;
    for (const auto& e : edges) {
      if (e.agent_id == id) as_agent = true;
      if (e.patient_id == id) as_patient = true;
    }
    std::vector<double> ma, mp;
    std::vector<std::string> ids;
    for (const auto& m : n.members) {
      ma.push_back(before_collapse.at(m).intentionality);
      mp.push_back(before_collapse.at(m).vulnerability);
      ids.push_back(m);
    }
    if (n.kind == EntityKind::group) {
      if (!(as_agent || as_patient)) continue;
      n.intentionality = as_agent ? agg(ma, prof.group_aggregation) : mean(ma);
      n.vulnerability = as_patient ? agg(mp, prof.group_aggregation) : mean(mp);
    } else {
      if (as_agent && !ids.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < ids.size(); ++i)
          if (ma[i] > ma[best] || (ma[i] == ma[best] && ids[i] < ids[best])) best = i;
        n.intentionality = ma[best];
      }
      if (as_patient) n.vulnerability = mp.empty() ? 0.0 : agg(mp, prof.group_aggregation);
    }
  }

  // chains
  std::map<std::string, int> stage;
  if (graph.chain_order) {
    std::vector<HarmEdge> links;
    for (const auto& id : *graph.chain_order)
      for (const auto& e : edges)
        if (e.id == id) links.push_back(e);
    std::vector<HarmEdge> out;
    std::vector<std::set<std::string>> folded;
    HarmEdge cur = links[0];
    std::set<std::string> src{cur.id};
    for (std::size_t i = 1; i < links.size(); ++i) {
      const HarmEdge& nx = links[i];
      if (ents.at(*nx.agent_id).intentionality < prof.tool_threshold) {
        HarmEdge m = nx;
        m.id = cur.id + "." + nx.id;
        m.agent_id = cur.agent_id;
        m.causality = cur.causality * nx.causality;
        cur = m;
        src.insert(nx.id);
      } else {
        out.push_back(cur);
        folded.push_back(src);
        cur = nx;
        src = {nx.id};
      }
    }
    out.push_back(cur);
    folded.push_back(src);
    for (std::size_t k = 0; k < out.size(); ++k) stage[out[k].id] = static_cast<int>(k) + 1;

    std::vector<HarmEdge> rewritten;
    std::set<std::size_t> placed;
    for (const auto& e : edges) {
      bool in_group = false;
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (folded[k].size() > 1 && folded[k].count(e.id)) {
          in_group = true;
          if (!placed.count(k)) {
            rewritten.push_back(out[k]);
            placed.insert(k);
          }
        }
      }
      if (!in_group) rewritten.push_back(e);
    }
    edges = rewritten;
  }

  Judgment j;
  j.scenario = graph.name;
  j.profile = prof.name;
  for (const auto& e : edges) {
    if (!e.agent_id) continue;
    const EntityNode& ag = ents.at(*e.agent_id);
    const EntityNode& pt = ents.at(*e.patient_id);

    double a = ag.intentionality;
    if (prof.inference_mode == InferenceMode::heuristic) {
      if (e.valence < 0.0) a = std::min(1.0, a + prof.knobe_gain * -e.valence * e.suffering * (1.0 - a));
    } else if (e.valence < 0.0 && e.suffering > 0.0) {
      bool degenerate = false;
      a = posterior_mean(prof.bayes_grid, a, e.causality, prof.bayes_background, degenerate);
    }

    bool tragedy = e.exogenous_sufficiency >= prof.tragedy_threshold;
    double agent_p = ag.vulnerability;
    RoleLock agent_lock = ag.lock;
    std::string agent_name = ag.id;
    if (tragedy) {
      a = prof.default_system_a;
      agent_p = 0.0;
      agent_lock = RoleLock::none;
      agent_name = "system";
    }

    Cast ca = cast(a, agent_p, prof.sigma_t, agent_lock, prof.tie_epsilon);
    Cast cp = cast(pt.intentionality, pt.vulnerability, prof.sigma_t, pt.lock, prof.tie_epsilon);

    auto kit = prof.k_map.find(e.act_category);
    double k = kit == prof.k_map.end() ? 1.0 : kit->second;
    double damp = (!tragedy && ag.kind == EntityKind::institution && ag.members.empty()) ? prof.default_system_a : 1.0;

    DyadRecord r;
    r.edge_id = e.id;
    r.agent_id = agent_name;
    r.patient_id = pt.id;
    r.a_final = ca.a;
    r.p_final = cp.p;
    r.h = e.causality;
    r.s = e.suffering;
    r.wrongness = k * std::pow(r.a_final * r.p_final * r.h, prof.alpha) * damp;
    r.stage = stage.count(e.id) ? stage[e.id] : 0;
    r.agent_n_eff = (!tragedy && ag.kind == EntityKind::group) ? 1.0 + (ag.group_size - 1) * (1.0 - ag.entitativity)
                                                               : 1.0;
    r.patient_n_eff = pt.kind == EntityKind::group ? 1.0 + (pt.group_size - 1) * (1.0 - pt.entitativity) : 1.0;
    r.agent_attributed = r.a_final / r.agent_n_eff;
    r.patient_attributed = r.p_final / r.patient_n_eff;
    r.member_wrongness = k * std::pow(r.agent_attributed * r.patient_attributed * r.h, prof.alpha) * damp;
    if (r.wrongness == 0.0) r.classification = Classification::neutral;
    else if (tragedy) r.classification = Classification::tragedy;
    else if (ca.flag || cp.flag) r.classification = Classification::complex;
    else r.classification = Classification::wrong;

    j.total_wrongness += r.wrongness;
    j.dyad_records.push_back(r);
  }
  return j;
}

}  // namespace dyadic::testing
