#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dyadic::testing {

std::vector<double> bayes_oracle(const std::vector<double>& grid, const std::vector<double>& prior, bool observed,
                                 double causality, double background) {
  std::vector<double> joint(grid.size());
  double z = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double like = background + (1.0 - background) * grid[i] * causality;
    joint[i] = prior[i] * (observed ? like : 1.0 - like);
    z += joint[i];
  }
  for (auto& m : joint) m /= z;
  return joint;
}

namespace {

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v == 0.0 ? 0.0 : v);
  return buf;
}

double shifted_a(const EntityNode& n, const CultureProfile& p) {
  if (!n.community || n.community->empty()) return n.intentionality;
  if (p.observer_community && *p.observer_community == *n.community) return n.intentionality;
  return std::min(1.0, n.intentionality + p.delta_a_outgroup);
}

double shifted_p(const EntityNode& n, const CultureProfile& p) {
  if (!n.community || n.community->empty()) return n.vulnerability;
  if (p.observer_community && *p.observer_community == *n.community && n.vulnerability > 0.0)
    return std::min(1.0, n.vulnerability + p.delta_p_ingroup);
  return n.vulnerability;
}

}  // namespace

std::string conflict_oracle(const std::vector<ObligationEdge>& obs, const DyadicGraph& graph,
                            const CultureProfile& profile) {
  struct Hit {
    std::string kind;
    const ObligationEdge* x;
    const ObligationEdge* y;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      const auto& x = obs[i];
      const auto& y = obs[j];
      const bool same_agent = x.agent_id == y.agent_id;
      const bool opposite = x.direction != y.direction;
      bool flagged = false;
      for (const auto& id : x.excludes) flagged = flagged || id == y.id;
      for (const auto& id : y.excludes) flagged = flagged || id == x.id;
      if (same_agent && ((x.action_tag == y.action_tag && opposite) || flagged)) hits.push_back({"bottleneck", &x, &y});
      const auto lo = AgencyRequirement::low, hi = AgencyRequirement::high;
      if (same_agent && ((x.agency_requirement == lo && y.agency_requirement == hi) ||
                         (x.agency_requirement == hi && y.agency_requirement == lo)))
        hits.push_back({"authority_paradox", &x, &y});
      if (same_agent && x.patient_id == y.patient_id && opposite && x.demanded_by && y.demanded_by &&
          *x.demanded_by != *y.demanded_by)
        hits.push_back({"stakeholder_intersection", &x, &y});
    }
  }

  auto weight = [&](const ObligationEdge& o) {
    const auto& a = graph.entities.at(o.agent_id);
    const auto& p = graph.entities.at(o.patient_id);
    auto it = profile.k_map.find(o.action_tag);
    double k = it == profile.k_map.end() ? 1.0 : it->second;
    return k * std::pow(shifted_a(a, profile) * shifted_p(p, profile), profile.alpha);
  };

  std::string out = "conflicts " + std::to_string(hits.size()) + "\n";
  int n = 0;
  for (const auto& h : hits) {
    out += "conflict " + std::to_string(++n) + " kind=" + h.kind + " obligations=" + h.x->id + "," + h.y->id + "\n";
    const ObligationEdge* first = h.x;
    const ObligationEdge* second = h.y;
    double wf = weight(*first), ws = weight(*second);
    if (ws > wf || (ws == wf && second->id < first->id)) {
      std::swap(first, second);
      std::swap(wf, ws);
    }
    out += "  priority 1 " + first->id + " agent=" + first->agent_id + " patient=" + first->patient_id +
           " W=" + fixed9(wf) + "\n";
    out += "  priority 2 " + second->id + " agent=" + second->agent_id + " patient=" + second->patient_id +
           " W=" + fixed9(ws) + "\n";
    const std::string order = first->id + "," + second->id;
    out += "  plan 1 sequential_staging order=" + order + "\n";
    int step = 1;
    if (h.kind != "stakeholder_intersection")
      out += "  plan " + std::to_string(++step) + " intermediary_insertion node=review_" + first->agent_id +
             " absorbs=" + order + "\n";
    out += "  plan " + std::to_string(++step) + " precommitment_communication target=" + second->id +
           " exogenous=1.000000000\n";
  }
  return out;
}

}  // namespace dyadic::testing
