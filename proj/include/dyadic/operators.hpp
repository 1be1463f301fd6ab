#pragma once

// Per-dyad psychological operators: typecasting, valence-dependent intent
// inference and the do(A=0) counterfactual appraisal.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadic/model.hpp"

namespace dyadic {

enum class SuppressedDimension { none, agent_side, patient_side };

std::string_view to_string(SuppressedDimension dim);

struct TypecastResult {
  double intentionality_out = 0.0;
  double vulnerability_out = 0.0;
  bool complexity_flag = false;
  SuppressedDimension suppressed_dimension = SuppressedDimension::none;
};

/// Projects (A, P) onto {A*P <= 1 - sigma} by scaling down the
/// non-dominant coordinate (or the one opposite a lock). Near-ties with no
/// lock are reported as complex and pass through untouched.
TypecastResult typecast(double intentionality, double vulnerability, double sigma_t, RoleLock lock,
                        double tie_epsilon);

/// Asymmetric side-effect boost: negative valence raises A toward 1 in
/// proportion to gain, |valence| and suffering; non-negative valence leaves A.
double infer_intent_heuristic(double prior_a, double suffering, double valence, double knobe_gain);

struct IntentPosterior {
  std::vector<double> grid;
  std::vector<double> masses;
  double point_estimate = 0.0;
};

class DegenerateEvidence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prior on `grid` whose mean is `a`: mass split linearly between the two
/// neighbouring levels (point mass at the nearest end outside the hull).
IntentPosterior prior_from_point(std::span<const double> grid, double a);

/// Discrete Bayes update with Pr(S=1 | A, H) = bg + (1 - bg) * A * H.
/// Throws DegenerateEvidence when no prior mass survives.
IntentPosterior infer_intent_bayes(const IntentPosterior& prior, bool suffering_observed, double causality,
                                   double background);

enum class AppraisalClass { mind_caused, tragedy };

struct AppraisalResult {
  AppraisalClass classification = AppraisalClass::mind_caused;
  std::optional<std::string> reassigned_agent;
};

inline constexpr const char* kTragedyAgentId = "system";

/// do(A=0) test: if the outcome is exogenously sufficient at or above the
/// threshold, the event is a tragedy and blame moves to the system.
AppraisalResult appraise_counterfactual(const HarmEdge& edge, double tragedy_threshold);

}  // namespace dyadic
