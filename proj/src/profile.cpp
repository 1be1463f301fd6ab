#include "dyadic/profile.hpp"

#include <algorithm>
#include <sstream>

#include "syntax.hpp"
#include "text_util.hpp"

namespace dyadic {

namespace {

using detail::Pair;
using detail::Value;

class ProfileReader {
 public:
  explicit ProfileReader(std::vector<ParseError>& errors) : errors_(errors) {}

  void read(const Pair& p, CultureProfile& out) {
    const auto& k = p.key;
    if (k == "name") {
      if (auto n = p.value->as_name()) out.name = *n;
      else error(p, "expected a name", ParseErrorKind::syntax);
    } else if (k == "alpha") {
      if (auto x = number(p)) {
        if (*x > 0.0) out.alpha = *x;
        else error(p, "alpha must be positive");
      }
    } else if (k == "sigma_t") {
      unit(p, out.sigma_t);
    } else if (k == "delta_p_ingroup") {
      unit(p, out.delta_p_ingroup);
    } else if (k == "delta_a_outgroup") {
      unit(p, out.delta_a_outgroup);
    } else if (k == "knobe_gain") {
      unit(p, out.knobe_gain);
    } else if (k == "default_diffuse_p") {
      unit(p, out.default_diffuse_p);
    } else if (k == "default_system_a") {
      unit(p, out.default_system_a);
    } else if (k == "tool_threshold") {
      unit(p, out.tool_threshold);
    } else if (k == "tragedy_threshold") {
      unit(p, out.tragedy_threshold);
    } else if (k == "tie_epsilon") {
      if (auto x = number(p)) {
        if (*x > 0.0 && *x <= 1.0) out.tie_epsilon = *x;
        else error(p, "tie_epsilon must lie in (0,1]");
      }
    } else if (k == "bayes_background") {
      if (auto x = number(p)) {
        if (*x >= 0.0 && *x < 1.0) out.bayes_background = *x;
        else error(p, "bayes_background must lie in [0,1)");
      }
    } else if (k == "observer_community") {
      if (auto n = p.value->as_name()) out.observer_community = *n;
      else error(p, "expected a community name", ParseErrorKind::syntax);
    } else if (k == "inference_mode") {
      auto n = p.value->as_name();
      auto mode = n ? parse_inference_mode(*n) : std::nullopt;
      if (mode) out.inference_mode = *mode;
      else error(p, "expected heuristic or bayesian", ParseErrorKind::syntax);
    } else if (k == "group_aggregation") {
      auto n = p.value->as_name();
      auto agg = n ? parse_group_aggregation(*n) : std::nullopt;
      if (agg) out.group_aggregation = *agg;
      else error(p, "expected max or mean", ParseErrorKind::syntax);
    } else if (k == "bayes_grid") {
      grid(p, out);
    } else if (k == "k_map") {
      k_map(p, out);
    } else {
      errors_.push_back({p.line, p.column, "unknown key '" + k + "'", ParseErrorKind::unknown_key});
    }
  }

 private:
  void error(const Pair& p, std::string message, ParseErrorKind kind = ParseErrorKind::range) {
    errors_.push_back({p.value->line, p.value->column, "'" + p.key + "': " + std::move(message), kind});
  }

  std::optional<double> number(const Pair& p) {
    if (p.value->kind != Value::Kind::number) {
      error(p, "expected a number", ParseErrorKind::syntax);
      return std::nullopt;
    }
    return p.value->number;
  }

  void unit(const Pair& p, double& field) {
    if (auto x = number(p)) {
      if (*x >= 0.0 && *x <= 1.0) field = *x;
      else error(p, p.value->text + " outside [0, 1]");
    }
  }

  void grid(const Pair& p, CultureProfile& out) {
    if (p.value->kind != Value::Kind::list) {
      error(p, "expected a list of levels", ParseErrorKind::syntax);
      return;
    }
    std::vector<double> levels;
    for (const auto& item : p.value->items) {
      if (item.kind != Value::Kind::number) {
        error(p, "grid levels must be numbers", ParseErrorKind::syntax);
        return;
      }
      if (item.number < 0.0 || item.number > 1.0) {
        error(p, "grid level " + item.text + " outside [0, 1]");
        return;
      }
      if (!levels.empty() && !(item.number > levels.back())) {
        error(p, "grid levels must be strictly increasing");
        return;
      }
      levels.push_back(item.number);
    }
    if (levels.empty()) {
      error(p, "grid must not be empty");
      return;
    }
    out.bayes_grid = std::move(levels);
  }

  void k_map(const Pair& p, CultureProfile& out) {
    if (p.value->kind != Value::Kind::map) {
      error(p, "expected a { category: k } block", ParseErrorKind::syntax);
      return;
    }
    for (const auto& entry : p.value->pairs) {
      if (entry.value->kind != Value::Kind::number) {
        errors_.push_back({entry.value->line, entry.value->column, "k for '" + entry.key + "' must be a number",
                           ParseErrorKind::syntax});
      } else if (!(entry.value->number > 0.0)) {
        errors_.push_back({entry.value->line, entry.value->column, "k for '" + entry.key + "' must be positive",
                           ParseErrorKind::range});
      } else {
        out.k_map[entry.key] = entry.value->number;
      }
    }
  }

  std::vector<ParseError>& errors_;
};

}  // namespace

Parsed<CultureProfile> load_profile(std::string_view source) {
  std::vector<ParseError> errors;
  auto tokens = detail::tokenize(source, errors);
  detail::Reader reader(tokens, errors);
  CultureProfile profile;
  if (auto pairs = reader.pairs_until_end()) {
    ProfileReader fields(errors);
    for (const auto& p : *pairs) fields.read(p, profile);
  }
  if (!errors.empty()) return errors;
  return profile;
}

std::string dump_profile(const CultureProfile& p) {
  std::ostringstream out;
  out << "name: " << detail::quote(p.name) << "\n";
  out << "alpha: " << format_scalar(p.alpha) << "\n";
  out << "k_map: {";
  bool first = true;
  for (const auto& [category, k] : p.k_map) {
    out << (first ? " " : ", ") << detail::quote(category) << ": " << format_scalar(k);
    first = false;
  }
  out << (p.k_map.empty() ? "}" : " }") << "\n";
  out << "sigma_t: " << format_scalar(p.sigma_t) << "\n";
  out << "delta_p_ingroup: " << format_scalar(p.delta_p_ingroup) << "\n";
  out << "delta_a_outgroup: " << format_scalar(p.delta_a_outgroup) << "\n";
  out << "knobe_gain: " << format_scalar(p.knobe_gain) << "\n";
  out << "default_diffuse_p: " << format_scalar(p.default_diffuse_p) << "\n";
  out << "default_system_a: " << format_scalar(p.default_system_a) << "\n";
  out << "tool_threshold: " << format_scalar(p.tool_threshold) << "\n";
  out << "tie_epsilon: " << format_scalar(p.tie_epsilon) << "\n";
  out << "tragedy_threshold: " << format_scalar(p.tragedy_threshold) << "\n";
  if (p.observer_community) out << "observer_community: " << detail::quote(*p.observer_community) << "\n";
  out << "inference_mode: " << to_string(p.inference_mode) << "\n";
  out << "bayes_background: " << format_scalar(p.bayes_background) << "\n";
  out << "bayes_grid: [";
  for (std::size_t i = 0; i < p.bayes_grid.size(); ++i) out << (i ? ", " : "") << format_scalar(p.bayes_grid[i]);
  out << "]\n";
  out << "group_aggregation: " << to_string(p.group_aggregation) << "\n";
  return out.str();
}

PassResult apply_group_adjustments(const DyadicGraph& graph, const CultureProfile& profile) {
  PassResult result{graph, {}};
  for (auto& [id, node] : result.graph.entities) {
    if (!node.community || node.community->empty()) continue;
    const bool in_group = profile.observer_community && *node.community == *profile.observer_community;
    if (in_group) {
      if (node.vulnerability <= 0.0) continue;
      const double before = node.vulnerability;
      node.vulnerability = std::min(1.0, before + profile.delta_p_ingroup);
      if (node.vulnerability != before) {
        result.trace.push_back({"group_adjustment", id, "P=" + format_scalar(before),
                                "P=" + format_scalar(node.vulnerability),
                                "in-group member of '" + *node.community + "' gains vulnerability"});
      }
    } else {
      const double before = node.intentionality;
      node.intentionality = std::min(1.0, before + profile.delta_a_outgroup);
      if (node.intentionality != before) {
        result.trace.push_back({"group_adjustment", id, "A=" + format_scalar(before),
                                "A=" + format_scalar(node.intentionality),
                                "out-group member of '" + *node.community + "' gains intentionality"});
      }
    }
  }
  if (!result.trace.empty()) result.graph.provenance.push_back("group_adjustment");
  return result;
}

}  // namespace dyadic
