#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "dyadic/cli.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace dyadic;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scen(const std::string& name) { return testing::fixture_path("scenarios/" + name); }
std::string prof(const std::string& name) { return testing::fixture_path("profiles/" + name); }

}  // namespace

TEST_CASE("judge happy path") {
  auto r = run({"judge", "--profile", prof("neutral.profile"), scen("firing_squad_e0.dyad")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("W=0.720000000") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("malformed scenario exits 1 with positioned diagnostics") {
  auto r = run({"judge", scen("malformed.dyad")});
  CHECK(r.code == kExitInput);
  CHECK(r.out.empty());
  CHECK(r.err.find("malformed.dyad:3:") != std::string::npos);
}

TEST_CASE("missing file exits 2") {
  CHECK(run({"judge", scen("does_not_exist.dyad")}).code == kExitIo);
  CHECK(run({"judge", "--profile", prof("missing.profile"), scen("rock.dyad")}).code == kExitIo);
}

TEST_CASE("lint") {
  auto r = run({"lint", scen("bottleneck.dyad")});
  CHECK(r.code == kExitConflicts);
  CHECK(r.out.rfind("conflicts 1\n", 0) == 0);
  CHECK(run({"lint", scen("no_obligations.dyad")}).code == kExitOk);
  auto d = run({"lint", scen("dangling_stakeholder.dyad")});
  CHECK(d.code == kExitInput);
  CHECK(d.err.find("nobody") != std::string::npos);
}

TEST_CASE("profile-check") {
  auto ok = run({"profile-check", prof("neutral.profile")});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("alpha: 1.000000") != std::string::npos);
  CHECK(ok.out.find("delta_p_ingroup: 0.000000") != std::string::npos);
  CHECK(ok.out.find("delta_a_outgroup: 0.000000") != std::string::npos);
  CHECK(run({"profile-check", prof("bad_alpha.profile")}).code == kExitInput);
  auto unknown = run({"profile-check", prof("unknown_key.profile")});
  CHECK(unknown.code == kExitInput);
  CHECK(unknown.err.find("gravity") != std::string::npos);
  CHECK(run({"profile-check", prof("nope.profile")}).code == kExitIo);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == kExitInput);
  CHECK(run({"judge"}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);
  CHECK(run({"judge", "--format", "yaml", scen("rock.dyad")}).code == kExitInput);
  auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("judge") != std::string::npos);
}

TEST_CASE("exit code precedence") {
  CHECK(run({"judge", scen("malformed.dyad"), scen("nope.dyad"), scen("rock.dyad")}).code == kExitIo);
  CHECK(run({"lint", scen("bottleneck.dyad"), scen("dangling_stakeholder.dyad")}).code == kExitInput);
  CHECK(run({"lint", scen("no_obligations.dyad"), scen("bottleneck.dyad")}).code == kExitConflicts);
}

TEST_CASE("trace, explain and json") {
  auto plain = run({"judge", scen("flood.dyad")});
  auto traced = run({"judge", "--trace", scen("flood.dyad")});
  CHECK(traced.out.rfind(plain.out, 0) == 0);
  CHECK(traced.out.size() > plain.out.size());
  auto explained = run({"explain", scen("flood.dyad")});
  CHECK(traced.out.substr(plain.out.size()) == explained.out);

  auto json = run({"judge", "--format", "json", scen("flood.dyad")});
  CHECK(json.code == kExitOk);
  auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["dyads"][0]["classification"] == "tragedy");

  auto lint_json = run({"lint", "--format", "json", scen("bottleneck.dyad")});
  CHECK(nlohmann::json::parse(lint_json.out)["conflicts"].size() == 1);
}

TEST_CASE("profile from the environment") {
  ::setenv(kProfileEnv, prof("knobe.profile").c_str(), 1);
  auto r = run({"judge", scen("knobe.dyad")});
  ::unsetenv(kProfileEnv);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("profile \"knobe\"") != std::string::npos);
  auto flag = run({"judge", "--profile", prof("neutral.profile"), scen("knobe.dyad")});
  CHECK(flag.out.find("profile \"neutral\"") != std::string::npos);
}

TEST_CASE("parallel jobs keep argument order and bytes") {
  std::vector<std::string> files;
  for (int i = 0; i < 6; ++i)
    for (const char* f : {"rock.dyad", "knobe.dyad", "middleman.dyad", "river_n1000.dyad", "flood.dyad"})
      files.push_back(scen(f));
  std::vector<std::string> serial{"judge", "--trace"};
  serial.insert(serial.end(), files.begin(), files.end());
  auto parallel = serial;
  parallel.insert(parallel.begin() + 1, {"--jobs", "4"});
  auto a = run(serial);
  auto b = run(parallel);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(run(parallel).out == b.out);
}

TEST_CASE("perceive") {
  auto r = run({"perceive", "rock"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "intentionality=0.000000 vulnerability=0.000000\n");
}
