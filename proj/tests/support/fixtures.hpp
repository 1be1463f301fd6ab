#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dyadic/dsl.hpp"
#include "dyadic/profile.hpp"

namespace dyadic::testing {

inline std::string fixture_path(const std::string& rel) { return std::string(DYADIC_FIXTURE_DIR) + "/" + rel; }
inline std::string golden_path(const std::string& rel) { return std::string(DYADIC_GOLDEN_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline DyadicGraph load_scenario(const std::string& name) {
  auto parsed = parse_scenario(slurp(fixture_path("scenarios/" + name)));
  if (!parsed) throw std::runtime_error(name + ": " + format_error(parsed.errors().front()));
  return *parsed;
}

inline CultureProfile load_profile_fixture(const std::string& name) {
  auto parsed = load_profile(slurp(fixture_path("profiles/" + name)));
  if (!parsed) throw std::runtime_error(name + ": " + format_error(parsed.errors().front()));
  return *parsed;
}

}  // namespace dyadic::testing
