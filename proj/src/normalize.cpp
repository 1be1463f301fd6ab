#include "dyadic/normalize.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace dyadic {

namespace {

std::string describe_entity(const EntityNode& n) {
  return "kind=" + std::string(to_string(n.kind)) + " A=" + format_scalar(n.intentionality) +
         " P=" + format_scalar(n.vulnerability) + (n.synthetic ? " synthetic" : "") + (n.latent ? " latent" : "");
}

std::string describe_edge(const HarmEdge& e) {
  return "agent=" + e.agent_id.value_or("?") + " patient=" + e.patient_id.value_or("?") +
         " H=" + format_scalar(e.causality) + " v=" + format_scalar(e.valence) + " S=" + format_scalar(e.suffering) +
         " x=" + format_scalar(e.exogenous_sufficiency);
}

class Completion {
 public:
  Completion(const DyadicGraph& graph, const CultureProfile& profile) : result_{graph, {}}, profile_(profile) {}

  PassResult run() {
    auto& g = result_.graph;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (!is_scored(g.edges[i])) continue;
      if (!g.edges[i].patient_id) fill(i, Role::patient);
      if (!g.edges[i].agent_id) fill(i, Role::agent);
    }
    if (!result_.trace.empty()) g.provenance.push_back("completion");
    return std::move(result_);
  }

 private:
  void fill(std::size_t index, Role role) {
    auto& g = result_.graph;
    const auto& other = role == Role::patient ? g.edges[index].agent_id : g.edges[index].patient_id;

    std::string chosen;
    std::string note;
    if (auto latent = best_latent(role, other)) {
      chosen = *latent;
      note = "promoted latent entity '" + chosen + "'";
    } else if (role == Role::patient) {
      chosen = synthetic("society", EntityKind::diffuse, 0.0, profile_.default_diffuse_p);
      note = "posited diffuse victim";
    } else if (g.systemic_agents_admissible) {
      chosen = synthetic("system", EntityKind::system, profile_.default_system_a, 0.0);
      note = "blame assigned to the system";
    } else {
      chosen = synthetic("supernatural", EntityKind::supernatural, profile_.default_system_a, 0.0);
      note = "no systemic agent admissible; blame assigned to a supernatural agent";
    }

    auto& edge = g.edges[index];
    const std::string slot = role == Role::patient ? "patient" : "agent";
    (role == Role::patient ? edge.patient_id : edge.agent_id) = chosen;
    result_.trace.push_back({"completion", edge.id, slot + "=?", slot + "=" + chosen, note});
  }

  std::optional<std::string> best_latent(Role role, const std::optional<std::string>& exclude) const {
    const EntityNode* best = nullptr;
    for (const auto& [id, node] : result_.graph.entities) {
      if (!node.latent || (exclude && *exclude == id)) continue;
      const double score = role == Role::patient ? node.vulnerability : node.intentionality;
      const double best_score = best ? (role == Role::patient ? best->vulnerability : best->intentionality) : -1.0;
      if (score > best_score) best = &node;  // map order gives the smallest id on ties
    }
    return best ? std::optional<std::string>(best->id) : std::nullopt;
  }

  std::string synthetic(const std::string& base, EntityKind kind, double a, double p) {
    auto& g = result_.graph;
    for (int suffix = 1;; ++suffix) {
      const std::string id = suffix == 1 ? base : base + "_" + std::to_string(suffix);
      const auto* existing = g.find_entity(id);
      if (existing) {
        if (existing->synthetic && existing->kind == kind) return id;
        continue;
      }
      EntityNode node;
      node.id = id;
      node.kind = kind;
      node.intentionality = a;
      node.vulnerability = p;
      node.synthetic = true;
      result_.trace.push_back({"completion", id, "absent", describe_entity(node), "inserted synthetic node"});
      g.add_entity(std::move(node));
      return id;
    }
  }

  PassResult result_;
  const CultureProfile& profile_;
};

double aggregate(const std::vector<double>& values, GroupAggregation aggregation) {
  if (aggregation == GroupAggregation::max) return *std::max_element(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

bool is_scored(const HarmEdge& edge) { return edge.agent_id.has_value() || edge.suffering > 0.0; }

PassResult complete_dyad(const DyadicGraph& graph, const CultureProfile& profile) {
  return Completion(graph, profile).run();
}

EntityNode collapse_group(std::string id, std::span<const EntityNode> members, double entitativity, Role role,
                          GroupAggregation aggregation) {
  if (members.empty()) throw std::invalid_argument("collapse_group: member list is empty");
  std::vector<double> a;
  std::vector<double> p;
  EntityNode group;
  for (const auto& m : members) {
    if (m.kind != EntityKind::individual)
      throw std::invalid_argument("collapse_group: member '" + m.id + "' is not an individual");
    a.push_back(m.intentionality);
    p.push_back(m.vulnerability);
    group.members.push_back(m.id);
  }
  group.id = std::move(id);
  group.kind = EntityKind::group;
  group.group_size = static_cast<int>(members.size());
  group.entitativity = entitativity;
  group.intentionality = aggregate(a, role == Role::agent ? aggregation : GroupAggregation::mean);
  group.vulnerability = aggregate(p, role == Role::patient ? aggregation : GroupAggregation::mean);
  return group;
}

double effective_group_size(int group_size, double entitativity) {
  return 1.0 + static_cast<double>(group_size - 1) * (1.0 - entitativity);
}

Attribution fractional_attribution(double group_value, int group_size, double entitativity) {
  const double n_eff = effective_group_size(group_size, entitativity);
  return {group_value / n_eff, n_eff};
}

Attribution fractional_attribution(const EntityNode& group, Role role) {
  return fractional_attribution(role == Role::agent ? group.intentionality : group.vulnerability, group.group_size,
                                group.entitativity);
}

ReductionResult agentic_reduction(const EntityNode& institution, const DyadicGraph& graph) {
  const EntityNode* best = nullptr;
  for (const auto& id : institution.members) {
    const auto* m = graph.find_entity(id);
    if (!m) continue;
    if (!best || m->intentionality > best->intentionality ||
        (m->intentionality == best->intentionality && m->id < best->id))
      best = m;
  }
  return {best ? std::optional<std::string>(best->id) : std::nullopt};
}

PassResult collapse_collectives(const DyadicGraph& graph, const CultureProfile& profile) {
  PassResult result{graph, {}};
  auto& g = result.graph;
  for (auto& [id, node] : g.entities) {
    if (!node.is_collective()) continue;
    bool as_agent = false;
    bool as_patient = false;
    for (const auto& e : graph.edges) {
      as_agent |= e.agent_id == id;
      as_patient |= e.patient_id == id;
    }
    if (!as_agent && !as_patient) continue;

    std::vector<EntityNode> members;
    for (const auto& m : node.members) {
      if (const auto* member = graph.find_entity(m)) members.push_back(*member);
    }
    const std::string before = describe_entity(node);

    if (node.kind == EntityKind::group) {
      if (members.empty()) continue;
      const auto role = as_agent ? Role::agent : Role::patient;
      auto collapsed = collapse_group(id, members, node.entitativity, role, profile.group_aggregation);
      double a = collapsed.intentionality;
      double p = collapsed.vulnerability;
      if (as_agent && as_patient) {
        p = collapse_group(id, members, node.entitativity, Role::patient, profile.group_aggregation).vulnerability;
      }
      if (a != node.intentionality || p != node.vulnerability) {
        node.intentionality = a;
        node.vulnerability = p;
        result.trace.push_back({"group_collapse", id, before, describe_entity(node),
                                "collapsed " + std::to_string(members.size()) + (members.size() == 1 ? " member" : " members") +
                                    " (" + std::string(to_string(profile.group_aggregation)) + ")"});
      }
      continue;
    }

    // Institutions.
    if (as_agent) {
      const auto reduction = agentic_reduction(node, graph);
      if (reduction.ungrounded()) {
        result.trace.push_back({"agentic_reduction", id, before, before,
                                "no member to serve as proxy; moral edge is ungrounded"});
      } else {
        const auto* proxy = graph.find_entity(*reduction.proxy);
        if (proxy->intentionality != node.intentionality) {
          node.intentionality = proxy->intentionality;
          result.trace.push_back({"agentic_reduction", id, before, describe_entity(node),
                                  "proxy '" + proxy->id + "' stands in for the institution"});
        }
      }
    }
    if (as_patient) {
      const std::string mid = describe_entity(node);
      if (members.empty()) {
        if (node.vulnerability != 0.0) {
          node.vulnerability = 0.0;
          result.trace.push_back({"agentic_reduction", id, mid, describe_entity(node),
                                  "memberless institution cannot suffer; P set to 0"});
        }
      } else {
        const double p =
            collapse_group(id, members, node.entitativity, Role::patient, profile.group_aggregation).vulnerability;
        if (p != node.vulnerability) {
          node.vulnerability = p;
          result.trace.push_back({"agentic_reduction", id, mid, describe_entity(node),
                                  "institution suffers through its listed members"});
        }
      }
    }
  }
  const bool changed = std::any_of(result.trace.begin(), result.trace.end(),
                                   [](const TraceStep& s) { return s.before != s.after; });
  if (changed) g.provenance.push_back("group_collapse");
  return result;
}

ChainResult decompose_chain(const DyadicGraph& graph, const CultureProfile& profile) {
  if (!graph.chain_order || graph.chain_order->empty()) throw MalformedChain("graph declares no chain");
  const auto& order = *graph.chain_order;

  std::vector<HarmEdge> links;
  for (const auto& id : order) {
    const auto* e = graph.find_edge(id);
    if (!e) throw MalformedChain("chain names unknown edge '" + id + "'");
    if (!e->agent_id || !e->patient_id) throw MalformedChain("chain edge '" + id + "' lacks an endpoint");
    if (!links.empty() && links.back().patient_id != e->agent_id)
      throw MalformedChain("edge '" + id + "' does not start where '" + links.back().id + "' ends");
    links.push_back(*e);
  }

  ChainResult result{{}, graph, {}};
  std::vector<HarmEdge> emitted;
  std::vector<std::vector<std::string>> sources;  // original edge ids folded into each emitted edge
  std::vector<InstrumentCollapse> pending;

  auto flush = [&](HarmEdge edge, std::vector<std::string> folded) {
    for (auto& c : pending) {
      c.rewritten_edge = edge.id;
      result.decomposition.instrument_collapses.push_back(c);
    }
    pending.clear();
    const int stage = static_cast<int>(emitted.size()) + 1;
    result.decomposition.dyads.push_back({edge, stage});
    emitted.push_back(std::move(edge));
    sources.push_back(std::move(folded));
  };

  HarmEdge current = links.front();
  std::vector<std::string> folded{current.id};
  for (std::size_t i = 1; i < links.size(); ++i) {
    const auto& next = links[i];
    const auto* intermediary = graph.find_entity(*next.agent_id);
    if (intermediary->intentionality < profile.tool_threshold) {
      pending.push_back({intermediary->id, "", intermediary->intentionality});
      HarmEdge merged = next;
      merged.id = current.id + "." + next.id;
      merged.agent_id = current.agent_id;
      merged.causality = current.causality * next.causality;
      current = std::move(merged);
      folded.push_back(next.id);
    } else {
      flush(std::move(current), std::move(folded));
      current = next;
      folded = {current.id};
    }
  }
  flush(std::move(current), std::move(folded));

  // Rewrite the graph: each emitted edge replaces the originals it folds.
  auto& g = result.graph;
  bool rewritten = false;
  for (std::size_t k = 0; k < emitted.size(); ++k) {
    if (sources[k].size() == 1) continue;
    rewritten = true;
    const std::set<std::string> drop(sources[k].begin(), sources[k].end());
    auto first = std::find_if(g.edges.begin(), g.edges.end(), [&](const HarmEdge& e) { return drop.count(e.id); });
    const auto pos = first - g.edges.begin();
    g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(), [&](const HarmEdge& e) { return drop.count(e.id); }),
                  g.edges.end());
    g.edges.insert(g.edges.begin() + pos, emitted[k]);
    result.trace.push_back({"chain_decomposition", emitted[k].id, "edges " + [&] {
                              std::string s;
                              for (const auto& id : sources[k]) s += (s.empty() ? "" : "+") + id;
                              return s;
                            }(),
                            describe_edge(emitted[k]), "intermediaries treated as instruments"});
  }

  for (const auto& c : result.decomposition.instrument_collapses) {
    const auto* node = g.find_entity(c.removed_id);
    const bool referenced =
        std::any_of(g.edges.begin(), g.edges.end(),
                    [&](const HarmEdge& e) { return e.agent_id == c.removed_id || e.patient_id == c.removed_id; }) ||
        std::any_of(g.obligations.begin(), g.obligations.end(),
                    [&](const ObligationEdge& o) {
                      return o.agent_id == c.removed_id || o.patient_id == c.removed_id || o.demanded_by == c.removed_id;
                    }) ||
        std::any_of(g.entities.begin(), g.entities.end(), [&](const auto& kv) {
          const auto& m = kv.second.members;
          return std::find(m.begin(), m.end(), c.removed_id) != m.end();
        });
    const std::string before = node ? describe_entity(*node) : "absent";
    if (node && !referenced) g.entities.erase(c.removed_id);
    result.trace.push_back({"chain_decomposition", c.removed_id, before,
                            std::string(referenced ? "kept (referenced elsewhere)" : "removed") +
                                " residual_blame=" + format_scalar(c.residual_blame),
                            "intermediary below tool threshold " + format_scalar(profile.tool_threshold) +
                                " folded into '" + c.rewritten_edge + "'"});
  }

  std::vector<std::string> new_order;
  for (const auto& e : emitted) new_order.push_back(e.id);
  g.chain_order = std::move(new_order);
  if (rewritten) g.provenance.push_back("chain_decomposition");
  return result;
}

}  // namespace dyadic
