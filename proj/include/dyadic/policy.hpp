#pragma once

// Node-sharing conflicts between obligations of one agent, with ordered
// resolution plans.

#include <string>
#include <string_view>
#include <vector>

#include "dyadic/engine.hpp"
#include "dyadic/model.hpp"

namespace dyadic {

enum class ConflictKind { bottleneck, authority_paradox, stakeholder_intersection };
enum class ResolutionKind { sequential_staging, intermediary_insertion, precommitment_communication };

std::string_view to_string(ConflictKind kind);
std::string_view to_string(ResolutionKind kind);

/// The dyad an obligation implies (its agent acting on its patient). The
/// dyad id is the obligation id.
struct PriorityEntry {
  std::string obligation_id;
  std::string agent_id;
  std::string patient_id;
  double wrongness = 0.0;
};

struct ResolutionStep {
  ResolutionKind kind = ResolutionKind::sequential_staging;
  std::vector<std::string> order;  // staging: obligations, highest priority first
  std::string review_node;         // intermediary: synthetic node id
  std::string target;              // precommitment: the losing obligation
  double exogenous_sufficiency = 1.0;
};

struct ConflictReport {
  ConflictKind kind = ConflictKind::bottleneck;
  std::vector<std::string> obligations;
  std::vector<PriorityEntry> priority;  // W descending, then id ascending
  std::vector<ResolutionStep> plan;
};

/// Checks every pair of obligations against the three conflict definitions;
/// one pair can yield several reports (in enum order). Priorities are
/// scored on the group-adjusted graph with H = 1 and k taken from the
/// obligation's action tag. Throws ValidationError on dangling references.
std::vector<ConflictReport> detect_conflicts(const std::vector<ObligationEdge>& obligations, const DyadicGraph& graph,
                                             const CultureProfile& profile);

/// Staging first; an intermediary for structural conflicts (bottleneck,
/// authority paradox); precommitment on the lowest-priority dyad last.
std::vector<ResolutionStep> plan_resolution(const ConflictReport& conflict, const CultureProfile& profile);

/// Applies a plan's precommitment step: every harm edge realising the
/// losing dyad gets exogenous_sufficiency raised to the step's value. When
/// no such edge exists a deviation edge is added so the effect is judgeable.
DyadicGraph apply_precommitment(const DyadicGraph& graph, const ConflictReport& conflict);

std::string export_conflicts(const std::vector<ConflictReport>& reports, ExportFormat format);

}  // namespace dyadic
