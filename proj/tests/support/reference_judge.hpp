#pragma once

#include "dyadic/model.hpp"

namespace dyadic::testing {

/// Straight-line re-statement of the scoring rules for small graphs. It
/// shares no code with the pass pipeline; only the dyad records and the
/// total are produced (the trace is left empty).
Judgment reference_judge(const DyadicGraph& graph, const CultureProfile& profile);

}  // namespace dyadic::testing
