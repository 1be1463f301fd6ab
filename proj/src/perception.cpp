#include "dyadic/perception.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "httplib.h"
#include "json.hpp"

namespace dyadic {

namespace {

std::string normalize(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

FixturePerceptionProvider::FixturePerceptionProvider() {
  // (descriptor, context) -> (A, P). An empty context is the unscoped entry.
  table_ = {
      {{"rock", ""}, {0.0, 0.0}},
      {{"adult human", ""}, {0.8, 0.7}},
      {{"child", ""}, {0.3, 0.95}},
      {{"dog", ""}, {0.35, 0.8}},
      {{"ceo", ""}, {0.85, 0.4}},
      {{"corporation", ""}, {0.7, 0.0}},
      {{"corporation", "institutional_betrayal"}, {0.9, 0.0}},
      {{"government", ""}, {0.65, 0.0}},
      {{"ai assistant", ""}, {0.75, 0.05}},
      {{"robot", ""}, {0.6, 0.05}},
      {{"society", ""}, {0.2, 0.6}},
      {{"environment", ""}, {0.0, 0.6}},
      {{"environment", "animist"}, {0.5, 0.9}},
      {{"river", ""}, {0.0, 0.3}},
      {{"river", "animist"}, {0.6, 0.8}},
      {{"god", ""}, {0.95, 0.05}},
  };
}

Perception FixturePerceptionProvider::perceive(const std::string& description,
                                               const std::optional<std::string>& context) const {
  const auto key = normalize(description);
  if (context) {
    auto it = table_.find({key, normalize(*context)});
    if (it != table_.end()) return it->second;
  }
  auto it = table_.find({key, ""});
  return it == table_.end() ? Perception{} : it->second;
}

Perception fixture_perceive(const std::string& description, const std::optional<std::string>& context) {
  static const FixturePerceptionProvider provider;
  return provider.perceive(description, context);
}

HttpPerceptionProvider::HttpPerceptionProvider(std::string host, int port, std::string path,
                                               std::chrono::milliseconds timeout)
    : host_(std::move(host)), port_(port), path_(std::move(path)), timeout_(timeout) {}

Perception HttpPerceptionProvider::perceive(const std::string& description,
                                            const std::optional<std::string>& context) const {
  httplib::Client client(host_, port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());

  nlohmann::json request{{"description", description}, {"context", context ? nlohmann::json(*context) : nullptr}};
  auto response = client.Post(path_, request.dump(), "application/json");
  if (!response) throw ProviderError("perception request failed: " + httplib::to_string(response.error()));
  if (response->status < 200 || response->status >= 300)
    throw ProviderError("perception service returned HTTP " + std::to_string(response->status));

  auto body = nlohmann::json::parse(response->body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw ProviderError("perception response is not a JSON object");
  auto read = [&](const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_number()) throw ProviderError(std::string("perception response lacks ") + key);
    double x = it->get<double>();
    if (!(x >= 0.0 && x <= 1.0)) throw ProviderError(std::string(key) + " outside [0,1]");
    return x;
  };
  return {read("intentionality"), read("vulnerability")};
}

}  // namespace dyadic
