#pragma once

#include <string>

#include "dyadic/model.hpp"

namespace dyadic {

/// W = k * (A * P * H)^alpha.
double score_dyad(double intentionality, double vulnerability, double causality, double k, double alpha);

/// Runs the fixed pipeline:
///   1 group adjustments, 2 completion, 3 collective collapse / agentic
///   reduction, 4 chain decomposition, then per dyad 5 intent inference,
///   6 counterfactual appraisal, 7 typecasting, 8 scoring.
/// Throws ValidationError when the graph or profile is invalid.
Judgment judge(const DyadicGraph& graph, const CultureProfile& profile);

/// Human-readable rendering of the trace, one entry per step.
std::string explain(const Judgment& judgment);

enum class ExportFormat { text, json };

struct ExportOptions {
  ExportFormat format = ExportFormat::text;
  bool include_trace = true;
};

/// Stable export: one record per dyad, the total, then the trace. Field
/// order is fixed. Text scalars use nine fractional digits; JSON numbers
/// are shortest round-trip doubles.
std::string export_judgment(const Judgment& judgment, const ExportOptions& options = {});

}  // namespace dyadic
