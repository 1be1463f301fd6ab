#include <algorithm>

#include "doctest.h"
#include "dyadic/model.hpp"
#include "support/generators.hpp"

using namespace dyadic;

namespace {

DyadicGraph two_node() {
  DyadicGraph g;
  g.name = "pair";
  g.add_entity({.id = "a", .intentionality = 0.8, .vulnerability = 0.3});
  g.add_entity({.id = "b", .intentionality = 0.2, .vulnerability = 0.9});
  HarmEdge e;
  e.id = "e1";
  e.agent_id = "a";
  e.patient_id = "b";
  e.suffering = 0.5;
  g.edges.push_back(e);
  return g;
}

bool has(const ValidationReport& r, const std::string& invariant, const std::string& id) {
  return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.invariant == invariant && v.id == id; });
}

}  // namespace

TEST_CASE("well-formed two-node graph validates") { CHECK(validate_graph(two_node()).empty()); }

TEST_CASE("edge to a missing entity is one referential-integrity violation") {
  auto g = two_node();
  g.edges[0].patient_id = "ghost";
  auto r = validate_graph(g);
  REQUIRE(r.size() == 1);
  CHECK(r[0].invariant == "referential-integrity");
  CHECK(r[0].id == "e1");
}

TEST_CASE("intentionality 1.3 is one range violation") {
  auto g = two_node();
  g.entities["a"].intentionality = 1.3;
  auto r = validate_graph(g);
  REQUIRE(r.size() == 1);
  CHECK(r[0].invariant == "range");
  CHECK(r[0].id == "a");
}

TEST_CASE("shape invariants") {
  auto g = two_node();
  SUBCASE("individual with members") {
    g.entities["a"].members = {"b"};
    CHECK(has(validate_graph(g), "individual-shape", "a"));
  }
  SUBCASE("group without members") {
    g.add_entity({.id = "mob", .kind = EntityKind::group, .group_size = 3});
    CHECK(has(validate_graph(g), "group-members", "mob"));
  }
  SUBCASE("group smaller than its member list") {
    g.add_entity({.id = "mob", .kind = EntityKind::group, .group_size = 1, .members = {"a", "b"}});
    CHECK(has(validate_graph(g), "group-size", "mob"));
  }
  SUBCASE("declared system node must be latent") {
    g.add_entity({.id = "fate", .kind = EntityKind::system});
    CHECK(has(validate_graph(g), "latent-kind", "fate"));
    g.entities["fate"].latent = true;
    CHECK(validate_graph(g).empty());
  }
  SUBCASE("memberless institution is allowed") {
    g.add_entity({.id = "market", .kind = EntityKind::institution});
    CHECK(validate_graph(g).empty());
  }
  SUBCASE("valence out of range") {
    g.edges[0].valence = -1.5;
    CHECK(has(validate_graph(g), "range", "e1"));
  }
  SUBCASE("chain must be contiguous") {
    HarmEdge e2;
    e2.id = "e2";
    e2.agent_id = "a";
    e2.patient_id = "b";
    g.edges.push_back(e2);
    g.chain_order = std::vector<std::string>{"e1", "e2"};
    CHECK(has(validate_graph(g), "chain", "e2"));
  }
}

TEST_CASE("profile validation") {
  CultureProfile p;
  CHECK(validate_profile(p).empty());
  p.alpha = 0.0;
  p.k_map["taboo"] = -1.0;
  p.bayes_grid = {0.5, 0.5};
  auto r = validate_profile(p);
  CHECK(has(r, "range", "alpha"));
  CHECK(has(r, "range", "k_map.taboo"));
  CHECK(has(r, "range", "bayes_grid"));
}

TEST_CASE("snapshot is deterministic and canonical") {
  auto g = two_node();
  CHECK(snapshot(g) == snapshot(g));

  DyadicGraph reordered;
  reordered.name = "pair";
  reordered.add_entity(g.entities["b"]);
  reordered.add_entity(g.entities["a"]);
  reordered.edges = g.edges;
  CHECK(snapshot(reordered) == snapshot(g));

  auto changed = g;
  changed.entities["a"].intentionality = 0.81;
  CHECK(snapshot(changed) != snapshot(g));
}

TEST_CASE("snapshot ignores edge order but not values (property)") {
  testing::Gen gen(11);
  for (int i = 0; i < 300; ++i) {
    auto g = testing::random_graph(gen);
    REQUIRE(validate_graph(g).empty());
    auto shuffled = g;
    std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), gen.engine());
    CHECK(snapshot(shuffled) == snapshot(g));
    if (!g.edges.empty()) {
      auto bumped = g;
      auto& e = bumped.edges[0];
      e.causality = e.causality > 0.5 ? e.causality - 0.25 : e.causality + 0.25;
      CHECK(snapshot(bumped) != snapshot(g));
    }
  }
}

TEST_CASE("scalar formatting") {
  CHECK(format_scalar(0.5) == "0.500000");
  CHECK(format_scalar(-0.0) == "0.000000");
  CHECK(format_export(1.0 / 3.0) == "0.333333333");
}

TEST_CASE("enum text round trips") {
  for (auto k : {EntityKind::individual, EntityKind::group, EntityKind::institution, EntityKind::diffuse,
                 EntityKind::system, EntityKind::supernatural})
    CHECK(parse_entity_kind(to_string(k)) == k);
  for (auto l : {RoleLock::none, RoleLock::locked_agent, RoleLock::locked_patient}) CHECK(parse_role_lock(to_string(l)) == l);
  CHECK_FALSE(parse_direction("sideways").has_value());
  CHECK(parse_agency("high") == AgencyRequirement::high);
}

TEST_CASE("k defaults to 1 for unmapped categories") {
  CultureProfile p;
  p.k_map["taboo"] = 3.0;
  CHECK(p.k_for("taboo") == 3.0);
  CHECK(p.k_for("other") == 1.0);
}
