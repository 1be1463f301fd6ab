#include "dyadic/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyadic {

std::string_view to_string(SuppressedDimension dim) {
  switch (dim) {
    case SuppressedDimension::none: return "none";
    case SuppressedDimension::agent_side: return "agent_side";
    case SuppressedDimension::patient_side: return "patient_side";
  }
  return "none";
}

namespace {

// Largest x with fl(fixed * x) <= budget. Pinning the floating-point
// boundary makes the projection exactly idempotent.
double scale_to_budget(double fixed, double budget) {
  double x = budget / fixed;
  while (x > 0.0 && fixed * x > budget) x = std::nextafter(x, 0.0);
  for (;;) {
    const double up = std::nextafter(x, std::numeric_limits<double>::infinity());
    if (fixed * up > budget) break;
    x = up;
  }
  return x;
}

}  // namespace

TypecastResult typecast(double a, double p, double sigma_t, RoleLock lock, double tie_epsilon) {
  TypecastResult out{a, p, false, SuppressedDimension::none};
  const double budget = 1.0 - sigma_t;
  if (a * p <= budget) return out;

  if (lock == RoleLock::none && std::abs(a - p) < tie_epsilon) {
    out.complexity_flag = true;
    return out;
  }

  bool suppress_patient = p < a;
  if (lock == RoleLock::locked_agent) suppress_patient = true;
  if (lock == RoleLock::locked_patient) suppress_patient = false;

  if (suppress_patient) {
    out.vulnerability_out = scale_to_budget(a, budget);
    out.suppressed_dimension = SuppressedDimension::patient_side;
  } else {
    out.intentionality_out = scale_to_budget(p, budget);
    out.suppressed_dimension = SuppressedDimension::agent_side;
  }
  return out;
}

double infer_intent_heuristic(double prior_a, double suffering, double valence, double knobe_gain) {
  if (valence >= 0.0) return prior_a;
  const double boost = knobe_gain * (-valence) * suffering * (1.0 - prior_a);
  return std::clamp(prior_a + boost, prior_a, 1.0);
}

IntentPosterior prior_from_point(std::span<const double> grid, double a) {
  IntentPosterior prior;
  prior.grid.assign(grid.begin(), grid.end());
  prior.masses.assign(grid.size(), 0.0);
  if (grid.empty()) return prior;

  if (a <= grid.front()) {
    prior.masses.front() = 1.0;
  } else if (a >= grid.back()) {
    prior.masses.back() = 1.0;
  } else {
    const auto upper = std::upper_bound(grid.begin(), grid.end(), a) - grid.begin();
    const auto lower = upper - 1;
    const double w = (a - grid[lower]) / (grid[upper] - grid[lower]);
    prior.masses[lower] = 1.0 - w;
    prior.masses[upper] = w;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) prior.point_estimate += prior.masses[i] * grid[i];
  return prior;
}

IntentPosterior infer_intent_bayes(const IntentPosterior& prior, bool suffering_observed, double causality,
                                   double background) {
  IntentPosterior post;
  post.grid = prior.grid;
  post.masses.resize(prior.masses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < prior.grid.size(); ++i) {
    const double likelihood = background + (1.0 - background) * prior.grid[i] * causality;
    const double evidence = suffering_observed ? likelihood : 1.0 - likelihood;
    post.masses[i] = prior.masses[i] * evidence;
    total += post.masses[i];
  }
  if (!(total > 0.0)) throw DegenerateEvidence("posterior has no mass: prior support and likelihood are disjoint");
  for (std::size_t i = 0; i < post.masses.size(); ++i) {
    post.masses[i] /= total;
    post.point_estimate += post.masses[i] * post.grid[i];
  }
  if (!post.grid.empty()) post.point_estimate = std::clamp(post.point_estimate, post.grid.front(), post.grid.back());
  return post;
}

AppraisalResult appraise_counterfactual(const HarmEdge& edge, double tragedy_threshold) {
  if (edge.exogenous_sufficiency >= tragedy_threshold) return {AppraisalClass::tragedy, std::string(kTragedyAgentId)};
  return {AppraisalClass::mind_caused, std::nullopt};
}

}  // namespace dyadic
