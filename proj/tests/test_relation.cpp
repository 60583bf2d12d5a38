#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "conlat/relation.hpp"
#include "support.hpp"

using namespace conlat;

namespace {

Relation random_relation(unsigned long long seed, int nodes, int edges) {
  std::mt19937_64 rng(seed);
  Relation r;
  for (int i = 0; i < edges; ++i)
    r.add(static_cast<int>(rng() % nodes), static_cast<int>(rng() % nodes),
          "e");
  return r;
}

}  // namespace

TEST_CASE("add keeps the first tag for duplicate edges") {
  Relation r;
  r.add(1, 2, "first");
  r.add(1, 2, "second");
  REQUIRE(*r.tag(1, 2) == "first");
  REQUIRE(r.edge_count() == 1);
}

TEST_CASE("united and intersected behave set-wise") {
  Relation a, b;
  a.add(1, 2, "a");
  a.add(2, 3, "a");
  b.add(2, 3, "b");
  b.add(3, 4, "b");
  Relation u = a.united(b);
  REQUIRE(u.edge_count() == 3);
  Relation i = a.intersected(b);
  REQUIRE(i.edge_count() == 1);
  REQUIRE(i.contains(2, 3));
}

TEST_CASE("restricted_to keeps only edges inside the id set") {
  Relation r;
  r.add(1, 2, "x");
  r.add(2, 3, "x");
  Relation s = r.restricted_to({1, 2});
  REQUIRE(s.contains(1, 2));
  REQUIRE(!s.contains(2, 3));
}

TEST_CASE("transitive closure matches the matrix oracle") {
  for (unsigned long long seed = 0; seed < 100; ++seed) {
    Relation r = random_relation(seed, 7, 10);
    Relation closed = r.transitive_closure();
    Relation oracle = testsup::closure_oracle(r);
    INFO("seed " << seed);
    REQUIRE(closed == oracle);
  }
}

TEST_CASE("transitive closure is idempotent") {
  for (unsigned long long seed = 0; seed < 20; ++seed) {
    Relation closed = random_relation(seed, 6, 9).transitive_closure();
    REQUIRE(closed == closed.transitive_closure());
  }
}

TEST_CASE("find_cycle returns a closed chain of real edges") {
  Relation r;
  r.add(1, 2, "a");
  r.add(2, 3, "b");
  r.add(3, 1, "c");
  r.add(0, 1, "d");
  auto cycle = r.find_cycle();
  REQUIRE(cycle.has_value());
  REQUIRE(cycle->size() >= 2);
  for (std::size_t i = 0; i < cycle->size(); ++i) {
    REQUIRE(r.contains((*cycle)[i].from, (*cycle)[i].to));
    REQUIRE((*cycle)[i].to == (*cycle)[(i + 1) % cycle->size()].from);
  }
}

TEST_CASE("find_cycle is empty on DAGs, reports self loops") {
  Relation dag;
  dag.add(1, 2, "");
  dag.add(1, 3, "");
  dag.add(2, 3, "");
  REQUIRE(!dag.find_cycle().has_value());

  Relation loop;
  loop.add(5, 5, "self");
  auto cycle = loop.find_cycle();
  REQUIRE(cycle.has_value());
  REQUIRE(cycle->size() == 1);
}

TEST_CASE("find_cycle agrees with closure on random graphs") {
  for (unsigned long long seed = 0; seed < 100; ++seed) {
    Relation r = random_relation(seed, 6, 8);
    Relation closed = r.transitive_closure();
    bool closure_cyclic = false;
    for (int n : closed.nodes())
      if (closed.contains(n, n)) closure_cyclic = true;
    INFO("seed " << seed);
    REQUIRE(r.find_cycle().has_value() == closure_cyclic);
  }
}

TEST_CASE("topo_sort respects the relation with ascending-id tiebreak") {
  Relation r;
  r.add(5, 1, "");
  auto order = topo_sort(r, {1, 2, 3, 5});
  REQUIRE(order.has_value());
  REQUIRE(*order == std::vector<int>{2, 3, 5, 1});
}

TEST_CASE("topo_sort refuses cycles") {
  Relation r;
  r.add(1, 2, "");
  r.add(2, 1, "");
  REQUIRE(!topo_sort(r, {1, 2}).has_value());
}
