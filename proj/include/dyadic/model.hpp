#pragma once

// Shared domain types: the dyadic graph IR, culture profiles and judgment
// records. Every pass takes these by const reference and returns new values.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

enum class EntityKind { individual, group, institution, diffuse, system, supernatural };
enum class RoleLock { none, locked_agent, locked_patient };

struct EntityNode {
  std::string id;
  EntityKind kind = EntityKind::individual;
  double intentionality = 0.5;  // A
  double vulnerability = 0.5;   // P
  int group_size = 1;
  double entitativity = 0.0;
  std::vector<std::string> members;
  bool latent = false;
  bool synthetic = false;  // inserted by the completion pass
  RoleLock lock = RoleLock::none;
  std::optional<std::string> community;

  bool is_collective() const {
    return kind == EntityKind::group || kind == EntityKind::institution;
  }
};

/// A directed agent -> patient action. Either endpoint may be absent in raw
/// input (an open observation); the completion pass closes it.
struct HarmEdge {
  std::string id;
  std::optional<std::string> agent_id;
  std::optional<std::string> patient_id;
  double causality = 1.0;  // H
  double valence = -1.0;
  double suffering = 0.0;  // S
  double exogenous_sufficiency = 0.0;
  std::string act_category;
};

enum class Direction { promote, prevent };
enum class AgencyRequirement { none, low, high };

struct ObligationEdge {
  std::string id;
  std::string policy_id;
  std::string agent_id;
  std::string patient_id;
  Direction direction = Direction::promote;
  std::string action_tag;
  std::optional<std::string> demanded_by;
  AgencyRequirement agency_requirement = AgencyRequirement::none;
  std::vector<std::string> excludes;  // obligations declared mutually exclusive with this one
};

struct DyadicGraph {
  std::string name;
  bool systemic_agents_admissible = true;
  std::map<std::string, EntityNode> entities;
  std::vector<HarmEdge> edges;
  std::optional<std::vector<std::string>> chain_order;
  std::vector<ObligationEdge> obligations;
  std::vector<std::string> provenance;

  const EntityNode* find_entity(std::string_view id) const;
  EntityNode* find_entity(std::string_view id);
  const HarmEdge* find_edge(std::string_view id) const;
  HarmEdge* find_edge(std::string_view id);
  void add_entity(EntityNode node);
};

enum class InferenceMode { heuristic, bayesian };
enum class GroupAggregation { max, mean };

struct CultureProfile {
  std::string name = "default";
  std::map<std::string, double> k_map;
  double alpha = 1.0;
  double sigma_t = 0.0;
  double delta_p_ingroup = 0.0;
  double delta_a_outgroup = 0.0;
  double knobe_gain = 0.0;
  double default_diffuse_p = 0.5;
  double default_system_a = 0.5;
  double tool_threshold = 0.3;
  double tie_epsilon = 0.05;
  double tragedy_threshold = 0.5;
  std::optional<std::string> observer_community;
  InferenceMode inference_mode = InferenceMode::heuristic;
  double bayes_background = 0.1;
  std::vector<double> bayes_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  GroupAggregation group_aggregation = GroupAggregation::max;

  double k_for(const std::string& category) const;
};

struct TraceStep {
  std::string pass_name;
  std::string target;
  std::string before;
  std::string after;
  std::string note;

  bool operator==(const TraceStep&) const = default;
};

/// Output of a graph-to-graph pass.
struct PassResult {
  DyadicGraph graph;
  std::vector<TraceStep> trace;
};

enum class Classification { wrong, tragedy, neutral, complex };

struct DyadRecord {
  std::string edge_id;
  std::string agent_id;
  std::string patient_id;
  double a_final = 0.0;
  double p_final = 0.0;
  double h = 0.0;
  double s = 0.0;
  double wrongness = 0.0;
  Classification classification = Classification::neutral;
  int stage = 0;  // position in a declared chain, 0 when not part of one
  double agent_n_eff = 1.0;
  double agent_attributed = 0.0;
  double patient_n_eff = 1.0;
  double patient_attributed = 0.0;
  double member_wrongness = 0.0;
};

struct Judgment {
  std::string scenario;
  std::string profile;
  std::vector<DyadRecord> dyad_records;
  double total_wrongness = 0.0;
  std::vector<TraceStep> trace;
};

struct Violation {
  std::string invariant;
  std::string id;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate_graph(const DyadicGraph& graph);
ValidationReport validate_profile(const CultureProfile& profile);

/// Canonical, order-independent rendering of a graph. Scalars are quantized
/// to the six fractional digits the scenario format can carry.
std::string snapshot(const DyadicGraph& graph);

// Enum <-> text helpers shared by the DSL, exports and CLI.
std::string_view to_string(EntityKind kind);
std::string_view to_string(RoleLock lock);
std::string_view to_string(Direction direction);
std::string_view to_string(AgencyRequirement agency);
std::string_view to_string(InferenceMode mode);
std::string_view to_string(GroupAggregation aggregation);
std::string_view to_string(Classification classification);

std::optional<EntityKind> parse_entity_kind(std::string_view text);
std::optional<RoleLock> parse_role_lock(std::string_view text);
std::optional<Direction> parse_direction(std::string_view text);
std::optional<AgencyRequirement> parse_agency(std::string_view text);
std::optional<InferenceMode> parse_inference_mode(std::string_view text);
std::optional<GroupAggregation> parse_group_aggregation(std::string_view text);

/// Fixed six-decimal rendering used by snapshots and serialization.
std::string format_scalar(double value);
/// Fixed nine-decimal rendering used by judgment exports.
std::string format_export(double value);

}  // namespace dyadic
