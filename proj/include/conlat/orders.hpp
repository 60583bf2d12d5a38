#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conlat/relation.hpp"
#include "conlat/trace.hpp"

namespace conlat {

/// Data order: relates operations on the same variable. Contains program
/// order restricted to same-variable pairs, writes-to, and, for every read r
/// with writer w2, every differently-valued op o1 on r's variable that
/// precedes r in program order is placed before w2. Transitively closed
/// (closure never leaves a variable).
inline Relation data_order(const Execution& exec) {
  Relation rel;
  for (const auto& a : exec.ops)
    for (const auto& [b, t] : exec.po.successors(a.id))
      if (exec.op(b).var == a.var) rel.add(a.id, b, "DO:po");
  for (const auto& [r, w] : exec.writes_to) rel.add(w, r, "DO:wt");
  for (const auto& [r, w2] : exec.writes_to) {
    const Operation& read = exec.op(r);
    for (const auto& o1 : exec.ops) {
      if (o1.var != read.var || o1.value == read.value) continue;
      if (exec.po.contains(o1.id, r) && o1.id != w2)
        rel.add(o1.id, w2, "DO:deduced");
    }
  }
  return rel.transitive_closure("DO:closure");
}

/// Write order: w1 before w2 whenever some read of w1 precedes w2 in
/// program order. Not transitively closed.
inline Relation write_read_write_order(const Execution& exec) {
  Relation rel;
  for (const auto& [r, w1] : exec.writes_to)
    for (const auto& [b, t] : exec.po.successors(r))
      if (is_write_kind(exec.op(b).kind)) rel.add(w1, b, "WO");
  return rel;
}

/// Causal relation: transitive closure of program order with writes-to.
inline Relation causal_relation(const Execution& exec) {
  Relation rel = exec.po;
  for (const auto& [r, w] : exec.writes_to) rel.add(w, r, "WT");
  return rel.transitive_closure("CR:closure");
}

/// Process data order: the edges common to program order and data order.
inline Relation process_data_order(const Execution& exec) {
  Relation pdo = exec.po.intersected(data_order(exec));
  Relation tagged;
  for (const auto& e : pdo.edges()) tagged.add(e.from, e.to, "PDO");
  return tagged;
}

/// One undetermined (write, read) pair of a serial order: for w and r on the
/// same variable with differing values and w not r's writer, exactly one of
/// `w before writer(r)` and `r before w` holds.
struct SerialOrderPair {
  int read = 0;
  int write = 0;
  int writer = 0;      // writes_to(read)
  bool forced = false; // only `w before writer(r)` viable: w precedes r in PO
};

/// All serial-order pairs over ops whose id satisfies `in_scope`, sorted by
/// (read id, write id).
inline std::vector<SerialOrderPair> serial_order_pairs(
    const Execution& exec, const std::function<bool(int)>& in_scope) {
  std::vector<SerialOrderPair> pairs;
  for (const auto& r : exec.ops) {
    if (!is_read_kind(r.kind) || !in_scope(r.id)) continue;
    int writer = exec.writer_of(r.id);
    for (const auto& w : exec.ops) {
      if (!is_write_kind(w.kind) || !in_scope(w.id)) continue;
      if (w.var != r.var || w.value == r.value) continue;
      SerialOrderPair p;
      p.read = r.id;
      p.write = w.id;
      p.writer = writer;
      p.forced = exec.po.contains(w.id, r.id);
      pairs.push_back(p);
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.read, a.write) < std::tie(b.read, b.write);
  });
  return pairs;
}

struct SerialOrderOptions {
  bool prune_forced = true;  // drop `r before w` when w precedes r in PO
  int pair_cap = 20;         // cap on undetermined pairs (raw when unpruned)
};

struct SerialOrderEnumeration {
  bool capped = false;       // pair count exceeded the cap; nothing visited
  long long visited = 0;
  bool stopped = false;      // visitor asked to stop
};

/// Enumerates serial orders deterministically: pairs in (read id, write id)
/// order, `w before writer(r)` branch first. The visitor returns false to
/// stop. Each yielded relation has one edge per pair.
inline SerialOrderEnumeration for_each_serial_order(
    const Execution& exec, const std::function<bool(int)>& in_scope,
    const SerialOrderOptions& opts,
    const std::function<bool(const Relation&)>& visit) {
  SerialOrderEnumeration result;
  auto pairs = serial_order_pairs(exec, in_scope);

  long long undetermined = 0;
  for (const auto& p : pairs)
    if (!opts.prune_forced || !p.forced) ++undetermined;
  if (undetermined > opts.pair_cap) {
    result.capped = true;
    return result;
  }

  std::vector<std::pair<int, int>> chosen;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == pairs.size()) {
      Relation so;
      for (const auto& [a, b] : chosen) so.add(a, b, "SO");
      ++result.visited;
      return visit(so);
    }
    const auto& p = pairs[i];
    // Branch A: w before writer(r).
    chosen.emplace_back(p.write, p.writer);
    if (!self(self, i + 1)) return false;
    chosen.pop_back();
    if (opts.prune_forced && p.forced) return true;
    // Branch B: r before w.
    chosen.emplace_back(p.read, p.write);
    if (!self(self, i + 1)) return false;
    chosen.pop_back();
    return true;
  };
  if (!rec(rec, 0)) result.stopped = true;
  return result;
}

/// Anti order induced by a serial order: write pairs forced apart by what
/// reads observe. Five rules; r1 ranges over reads of w1 (rules 1-3) or
/// reads after w1 in program order (rules 4-5), combined with data-order or
/// serial-order successors of r1 (directly, or via a later read r2 of the
/// same process for rules 1-2).
inline Relation anti_order(const Execution& exec, const Relation& so,
                           const Relation& data_ord) {
  Relation ao;
  auto add = [&](int w1, int w2, const char* tag) {
    if (is_write_kind(exec.op(w1).kind) && is_write_kind(exec.op(w2).kind))
      ao.add(w1, w2, tag);
  };
  for (const auto& r1 : exec.ops) {
    if (!is_read_kind(r1.kind)) continue;
    int w1 = exec.writer_of(r1.id);
    // Rules 1, 2: a later read r2 of the same process pins w2 after w1.
    for (const auto& [r2, t] : exec.po.successors(r1.id)) {
      if (!is_read_kind(exec.op(r2).kind)) continue;
      for (const auto& [w2, t2] : data_ord.successors(r2))
        add(w1, w2, "AO:1");
      for (const auto& [w2, t2] : so.successors(r2)) add(w1, w2, "AO:2");
    }
    // Rule 3: the serial order places r1 before w2.
    for (const auto& [w2, t] : so.successors(r1.id)) add(w1, w2, "AO:3");
  }
  // Rules 4, 5: w1 precedes a read r1 in program order and r1 precedes w2.
  for (const auto& w1 : exec.ops) {
    if (!is_write_kind(w1.kind)) continue;
    for (const auto& [r1, t] : exec.po.successors(w1.id)) {
      if (!is_read_kind(exec.op(r1).kind)) continue;
      for (const auto& [w2, t2] : data_ord.successors(r1)) add(w1.id, w2, "AO:4");
      for (const auto& [w2, t2] : so.successors(r1)) add(w1.id, w2, "AO:5");
    }
  }
  return ao;
}

struct AugmentationEnumeration {
  bool capped = false;   // combination count exceeded the cap
  bool cyclic = false;   // data order is cyclic; no augmentation exists
  long long visited = 0;
  bool stopped = false;
};

/// Enumerates augmented data orders: every combination of per-variable
/// linear extensions of data order. Yields the union of the per-variable
/// total orders (full pairwise edges). Deterministic: variables in sorted
/// order, extensions in lexicographic id order.
inline AugmentationEnumeration for_each_augmented_data_order(
    const Execution& exec, long long cap,
    const std::function<bool(const Relation&)>& visit) {
  AugmentationEnumeration result;
  Relation dord = data_order(exec);
  if (dord.find_cycle()) {
    result.cyclic = true;
    return result;
  }

  // Per-variable linear extensions, enumerated up front so the combination
  // count can be checked against the cap before visiting.
  std::vector<std::vector<std::vector<int>>> per_var;
  for (const auto& var : exec.variables) {
    std::vector<int> members;
    for (const auto& op : exec.ops)
      if (op.var == var) members.push_back(op.id);
    std::vector<std::vector<int>> exts;
    std::vector<int> prefix;
    std::vector<bool> used(members.size(), false);
    auto rec = [&](auto&& self) -> bool {
      if (prefix.size() == members.size()) {
        exts.push_back(prefix);
        return static_cast<long long>(exts.size()) <= cap;
      }
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (used[i]) continue;
        bool ready = true;
        for (std::size_t j = 0; j < members.size(); ++j)
          if (!used[j] && j != i && dord.contains(members[j], members[i])) {
            ready = false;
            break;
          }
        if (!ready) continue;
        used[i] = true;
        prefix.push_back(members[i]);
        bool ok = self(self);
        prefix.pop_back();
        used[i] = false;
        if (!ok) return false;
      }
      return true;
    };
    if (!rec(rec)) {
      result.capped = true;
      return result;
    }
    per_var.push_back(std::move(exts));
  }
  long long total = 1;
  for (const auto& exts : per_var) {
    total *= static_cast<long long>(exts.size());
    if (total > cap) {
      result.capped = true;
      return result;
    }
  }

  std::vector<std::size_t> pick(per_var.size(), 0);
  auto emit = [&]() -> bool {
    Relation aug;
    for (std::size_t v = 0; v < per_var.size(); ++v) {
      const auto& ext = per_var[v][pick[v]];
      for (std::size_t a = 0; a < ext.size(); ++a)
        for (std::size_t b = a + 1; b < ext.size(); ++b)
          aug.add(ext[a], ext[b], "DO'");
    }
    ++result.visited;
    return visit(aug);
  };
  auto rec = [&](auto&& self, std::size_t v) -> bool {
    if (v == per_var.size()) return emit();
    for (std::size_t i = 0; i < per_var[v].size(); ++i) {
      pick[v] = i;
      if (!self(self, v + 1)) return false;
    }
    return true;
  };
  if (!rec(rec, 0)) result.stopped = true;
  return result;
}

}  // namespace conlat
