#pragma once

// Compression of arbitrary scenario graphs toward dyadic form: completion of
// missing endpoints, collapse of collectives and chain decomposition.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadic/model.hpp"

namespace dyadic {

enum class Role { agent, patient };

/// Edges the engine scores: those with an agent, plus agentless
/// observations of positive suffering (which completion gives an agent).
bool is_scored(const HarmEdge& edge);

/// Closes every scored observation: missing patients become a latent
/// entity or a synthetic diffuse "society"; missing agents become a latent
/// entity, a synthetic "system" or (when systemic agents are inadmissible)
/// a synthetic "supernatural" node. Idempotent.
PassResult complete_dyad(const DyadicGraph& graph, const CultureProfile& profile);

/// Collapses individual members into one group node. The role coordinate is
/// aggregated per `aggregation`; the other coordinate is the member mean.
EntityNode collapse_group(std::string id, std::span<const EntityNode> members, double entitativity, Role role,
                          GroupAggregation aggregation = GroupAggregation::max);

struct Attribution {
  double per_member = 0.0;
  double n_eff = 1.0;
};

/// n_eff = 1 + (n - 1)(1 - e): full /n dilution at e = 0, none at e = 1.
double effective_group_size(int group_size, double entitativity);
Attribution fractional_attribution(double group_value, int group_size, double entitativity);
Attribution fractional_attribution(const EntityNode& group, Role role);

struct ReductionResult {
  std::optional<std::string> proxy;
  bool ungrounded() const { return !proxy; }
};

/// Picks the member with the highest intentionality (ties: smallest id) as
/// the institution's proxy. Memberless institutions are ungrounded.
ReductionResult agentic_reduction(const EntityNode& institution, const DyadicGraph& graph);

/// Graph pass applying collapse_group to groups and agentic reduction to
/// institutions according to the roles they play on edges.
PassResult collapse_collectives(const DyadicGraph& graph, const CultureProfile& profile);

class MalformedChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainDyad {
  HarmEdge edge;
  int stage = 1;
};

struct InstrumentCollapse {
  std::string removed_id;
  std::string rewritten_edge;
  double residual_blame = 0.0;
};

struct ChainDecomposition {
  std::vector<ChainDyad> dyads;
  std::vector<InstrumentCollapse> instrument_collapses;
};

struct ChainResult {
  ChainDecomposition decomposition;
  DyadicGraph graph;
  std::vector<TraceStep> trace;
};

/// Splits a declared chain into sequential dyads, folding intermediaries
/// below the tool threshold into a direct edge (causalities multiply).
/// Throws MalformedChain when the chain is absent or its endpoints do not line up.
ChainResult decompose_chain(const DyadicGraph& graph, const CultureProfile& profile);

}  // namespace dyadic
