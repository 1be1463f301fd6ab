#pragma once

// Mind-perception port. Implementations turn an entity description (and an
// optional persona/community context) into intentionality and vulnerability.

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace dyadic {

struct Perception {
  double intentionality = 0.5;
  double vulnerability = 0.5;

  bool operator==(const Perception&) const = default;
};

/// Raised by providers backed by an external service (timeouts, non-2xx,
/// malformed bodies). Kept separate from ParseError on purpose: it is an
/// environment failure, not an authoring one.
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PerceptionProvider {
 public:
  virtual ~PerceptionProvider() = default;
  virtual Perception perceive(const std::string& description, const std::optional<std::string>& context) const = 0;
};

/// Deterministic lookup into a bundled table. Unknown descriptors map to
/// the neutral point (0.5, 0.5).
class FixturePerceptionProvider final : public PerceptionProvider {
 public:
  FixturePerceptionProvider();
  Perception perceive(const std::string& description, const std::optional<std::string>& context) const override;

 private:
  std::map<std::pair<std::string, std::string>, Perception> table_;
};

Perception fixture_perceive(const std::string& description, const std::optional<std::string>& context = std::nullopt);

/// JSON over HTTP: POST {"description", "context"} to `path`, expects
/// {"intentionality", "vulnerability"} back.
class HttpPerceptionProvider final : public PerceptionProvider {
 public:
  HttpPerceptionProvider(std::string host, int port, std::string path = "/perceive",
                         std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));
  Perception perceive(const std::string& description, const std::optional<std::string>& context) const override;

 private:
  std::string host_;
  int port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

}  // namespace dyadic
