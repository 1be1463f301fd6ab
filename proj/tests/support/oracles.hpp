#pragma once

#include <string>
#include <vector>

#include "dyadic/model.hpp"

namespace dyadic::testing {

/// Brute-force Bayes update: prior x likelihood, normalized by the
/// explicit sum. Returns masses only.
std::vector<double> bayes_oracle(const std::vector<double>& grid, const std::vector<double>& prior, bool observed,
                                 double causality, double background);

/// Pairwise conflict enumeration straight from the three definitions,
/// rendered in the conflict export text format.
std::string conflict_oracle(const std::vector<ObligationEdge>& obligations, const DyadicGraph& graph,
                            const CultureProfile& profile);

}  // namespace dyadic::testing
