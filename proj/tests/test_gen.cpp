#include <catch2/catch_amalgamated.hpp>

#include "conlat/gen.hpp"
#include "conlat/lattice.hpp"
#include "conlat/transitions.hpp"
#include "support.hpp"

using namespace conlat;

TEST_CASE("generation is deterministic per spec") {
  GenSpec spec;
  spec.model = "sequential";
  spec.processes = 2;
  spec.ops_per_process = 5;
  spec.seed = 42;
  REQUIRE(gen_trace(spec) == gen_trace(spec));
  GenSpec other = spec;
  other.seed = 43;
  REQUIRE(gen_trace(spec) != gen_trace(other));
}

TEST_CASE("generated traces parse and satisfy their target model") {
  for (const char* model : {"sequential", "pram", "cache", "causal", "slow"}) {
    for (unsigned long long seed = 0; seed < 8; ++seed) {
      GenSpec spec;
      spec.model = model;
      spec.processes = 2;
      spec.ops_per_process = 5;
      spec.variables = 2;
      spec.seed = seed;
      std::string text = gen_trace(spec);
      Execution e = parse_trace(text);
      auto ref = parse_model_name(model);
      REQUIRE(ref.has_value());
      CheckOptions opts;
      opts.so.pair_cap = 40;  // small traces must be decided, not capped
      Verdict v = check_node(e, ref->node, opts);
      INFO(model << " seed " << seed << "\n" << text);
      REQUIRE(v.status == Status::Satisfied);
    }
  }
}

TEST_CASE("pram generator output classifies at or above GPO") {
  GenSpec spec;
  spec.model = "pram";
  spec.processes = 3;
  spec.ops_per_process = 8;
  spec.seed = 7;
  Execution e = parse_trace(gen_trace(spec));
  auto res = classify(e);
  bool covers_gpo = false;
  for (const auto& n : res.maximal) {
    auto c = compare(n, ModelNode{{Property::GPO}});
    if (c == Comparison::Stronger || c == Comparison::Equivalent)
      covers_gpo = true;
  }
  REQUIRE(covers_gpo);
}

TEST_CASE("cache generator output has acyclic data order") {
  for (unsigned long long seed = 0; seed < 20; ++seed) {
    GenSpec spec;
    spec.model = "cache";
    spec.processes = 2;
    spec.ops_per_process = 6;
    spec.seed = seed;
    Execution e = parse_trace(gen_trace(spec));
    INFO("seed " << seed);
    REQUIRE(!data_order(e).find_cycle().has_value());
  }
}

TEST_CASE("weak generator output is weak consistent") {
  for (unsigned long long seed = 0; seed < 10; ++seed) {
    GenSpec spec;
    spec.model = "weak";
    spec.processes = 2;
    spec.ops_per_process = 5;
    spec.seed = seed;
    spec.sync_prob = 0.4;
    Execution e = parse_trace(gen_trace(spec));
    INFO("seed " << seed << "\n" << gen_trace(spec));
    REQUIRE(check_synchronized(e, SyncModelKind::Weak).status ==
            Status::Satisfied);
  }
}

TEST_CASE("unknown generator model is an error") {
  GenSpec spec;
  spec.model = "bogus";
  REQUIRE_THROWS_AS(gen_trace(spec), std::invalid_argument);
}

TEST_CASE("zero mutations is the identity") {
  std::string text = testsup::slurp(
      testsup::corpus_path("examples_for_pram_and_cache_consistency_a"));
  REQUIRE(mutate_trace(text, 1, 0) == text);
}

TEST_CASE("mutated traces still validate") {
  for (unsigned long long seed = 0; seed < 20; ++seed) {
    GenSpec spec;
    spec.model = "sequential";
    spec.processes = 3;
    spec.ops_per_process = 6;
    spec.seed = seed;
    std::string text = gen_trace(spec);
    Execution before = parse_trace(text);
    bool has_read = false, has_alternative = false;
    for (const auto& op : before.ops)
      if (is_read_kind(op.kind)) has_read = true;
    for (const auto& op : before.ops)
      if (is_read_kind(op.kind))
        for (const auto& other : before.ops)
          if (is_write_kind(other.kind) && other.var == op.var &&
              other.value != op.value)
            has_alternative = true;
    if (!has_read || !has_alternative) continue;
    std::string mutated = mutate_trace(text, seed, 2);
    REQUIRE_NOTHROW(parse_trace(mutated));
  }
}

TEST_CASE("mutation changes read values, nothing else") {
  GenSpec spec;
  spec.model = "causal";
  spec.processes = 2;
  spec.ops_per_process = 6;
  spec.seed = 3;
  std::string text = gen_trace(spec);
  Execution before = parse_trace(text);
  std::string mutated;
  try {
    mutated = mutate_trace(text, 9, 1);
  } catch (const std::invalid_argument&) {
    return;  // no mutable read in this particular trace
  }
  Execution after = parse_trace(mutated);
  REQUIRE(before.ops.size() == after.ops.size());
  int changed = 0;
  for (std::size_t i = 0; i < before.ops.size(); ++i) {
    const auto& a = before.ops[i];
    const auto& b = after.ops[i];
    REQUIRE(a.kind == b.kind);
    REQUIRE(a.proc == b.proc);
    REQUIRE(a.var == b.var);
    if (a.value != b.value) {
      REQUIRE(is_read_kind(a.kind));
      ++changed;
    }
  }
  REQUIRE(changed == 1);
}

TEST_CASE("mutation without alternatives is an error") {
  // Single write, single read of it: the only alternative is bottom, which
  // is targetable, so use a trace with no reads at all instead.
  REQUIRE_THROWS_AS(mutate_trace("p1 w x 1\n", 0, 1), std::invalid_argument);
}

TEST_CASE("mutating a read to bottom is possible") {
  // With one write and one read, the only alternative value is bottom.
  std::string mutated = mutate_trace("p1 w x 1\np2 r x 1\n", 0, 1);
  Execution e = parse_trace(mutated);
  const Operation& read = e.op(static_cast<int>(e.initial_writes.size()) + 1);
  REQUIRE(is_read_kind(read.kind));
  REQUIRE(!read.value.has_value());
}
