#pragma once

#include <string>
#include <string_view>

#include "dyadic/model.hpp"
#include "dyadic/parse_error.hpp"

namespace dyadic {

/// Parses a `key: value` profile file. Unspecified fields keep the
/// defaults declared on CultureProfile.
Parsed<CultureProfile> load_profile(std::string_view source);

/// Normalized profile text listing every field, defaults included. The
/// output is itself a loadable profile.
std::string dump_profile(const CultureProfile& profile);

/// In-group entities gain vulnerability, out-group entities gain
/// intentionality, both clamped to 1. Entities with zero vulnerability are
/// mindless for the in-group shift and stay at zero.
PassResult apply_group_adjustments(const DyadicGraph& graph, const CultureProfile& profile);

}  // namespace dyadic
