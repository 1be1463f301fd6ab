#pragma once

// Plain-text scenario format. See docs/scenario-format.md for the grammar.

#include <string>
#include <string_view>

#include "dyadic/model.hpp"
#include "dyadic/parse_error.hpp"

namespace dyadic {

/// Total: never throws on malformed input. A successful parse always
/// yields a graph with an empty validation report.
Parsed<DyadicGraph> parse_scenario(std::string_view source);

/// Inverse of parse_scenario up to snapshot equality.
std::string serialize_graph(const DyadicGraph& graph);

}  // namespace dyadic
