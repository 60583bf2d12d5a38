#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "conlat/relation.hpp"
#include "conlat/trace.hpp"
#include "conlat/verdict.hpp"

namespace conlat {

enum class SerialMode { Total, Partial };

struct ViewQuery {
  std::vector<OperationPattern> subset;  // initial writes always included
  Relation relation;                     // must be respected on the subset
  SerialMode mode = SerialMode::Total;
  long long budget = 1'000'000;          // search nodes before Unknown
  std::string label;                     // witness label
};

/// A total order over `ids` is serial if every read sees the most recent
/// same-variable write-kind operation before it, i.e. that write carries the
/// read's value.
inline bool is_serial(const Execution& exec, const std::vector<int>& order) {
  std::map<std::string, int> last_write;
  for (int id : order) {
    const Operation& op = exec.op(id);
    if (is_read_kind(op.kind)) {
      auto it = last_write.find(op.var);
      if (it == last_write.end()) return false;
      if (exec.op(it->second).value != op.value) return false;
    }
    if (is_write_kind(op.kind)) last_write[op.var] = op.id;
  }
  return true;
}

inline bool respects(const Relation& rel, const std::vector<int>& order) {
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (int id : order)
    for (const auto& [to, t] : rel.successors(id)) {
      auto it = pos.find(to);
      if (it != pos.end() && it->second <= pos[id]) return false;
    }
  return true;
}

namespace detail {

inline std::set<int> query_subset(const Execution& exec,
                                  const std::vector<OperationPattern>& pats) {
  std::set<int> ids = select(exec, pats);
  for (int w : exec.initial_writes) ids.insert(w);
  return ids;
}

struct SearchState {
  const Execution* exec;
  std::vector<int> ids;                  // ascending
  Relation rel;                          // restricted to ids
  std::map<int, std::vector<int>> preds; // relation predecessors per id
  long long budget;
  long long spent = 0;
  bool out_of_budget = false;

  std::vector<int> order;
  std::set<int> placed;
  std::map<std::string, int> last_write;
  std::map<std::string, std::vector<int>> pending_reads;  // unplaced, per var

  // Visits every serial linear extension; visitor returns false to stop.
  bool run(const std::function<bool(const std::vector<int>&)>& visit) {
    if (order.size() == ids.size()) return visit(order);
    for (int id : ids) {
      if (placed.count(id)) continue;
      if (++spent > budget) {
        out_of_budget = true;
        return false;
      }
      if (!can_place(id)) continue;
      const Operation& op = exec->op(id);
      int saved_last = -1;
      bool had_last = false;
      if (is_write_kind(op.kind)) {
        auto it = last_write.find(op.var);
        had_last = it != last_write.end();
        if (had_last) saved_last = it->second;
        last_write[op.var] = id;
      }
      auto& pend = pending_reads[op.var];
      bool was_pending = false;
      if (is_read_kind(op.kind)) {
        auto it = std::find(pend.begin(), pend.end(), id);
        if (it != pend.end()) {
          pend.erase(it);
          was_pending = true;
        }
      }
      placed.insert(id);
      order.push_back(id);
      bool keep_going = run(visit);
      order.pop_back();
      placed.erase(id);
      if (is_read_kind(op.kind) && was_pending) pend.push_back(id);
      if (is_write_kind(op.kind)) {
        if (had_last)
          last_write[op.var] = saved_last;
        else
          last_write.erase(op.var);
      }
      if (!keep_going) return false;
    }
    return true;
  }

  bool can_place(int id) const {
    const Operation& op = exec->op(id);
    auto p = preds.find(id);
    if (p != preds.end())
      for (int pre : p->second)
        if (!placed.count(pre)) return false;
    if (is_read_kind(op.kind)) {
      auto it = last_write.find(op.var);
      if (it == last_write.end()) return false;
      if (exec->op(it->second).value != op.value) return false;
    }
    if (is_write_kind(op.kind)) {
      // A write dooms any still-unplaced read whose writer is already the
      // current last write: that read can never see its writer again.
      auto it = pending_reads.find(op.var);
      auto lw = last_write.find(op.var);
      if (it != pending_reads.end() && lw != last_write.end()) {
        for (int r : it->second) {
          int writer = exec->writer_of(r);
          if (writer == lw->second && writer != id) return false;
        }
      }
    }
    return true;
  }
};

inline SearchState make_state(const Execution& exec, const std::set<int>& ids,
                              const Relation& restricted, long long budget) {
  SearchState st;
  st.exec = &exec;
  st.ids.assign(ids.begin(), ids.end());
  st.rel = restricted;
  st.budget = budget;
  for (int id : st.ids)
    for (const auto& [to, t] : restricted.successors(id))
      st.preds[to].push_back(id);
  for (int id : st.ids) {
    const Operation& op = exec.op(id);
    if (is_read_kind(op.kind)) st.pending_reads[op.var].push_back(id);
  }
  return st;
}

}  // namespace detail

/// Decides whether a serial view of the selected operations exists that
/// respects the relation (restricted to the subset). Satisfied carries the
/// first view found (candidates tried in ascending id order, so the result
/// is deterministic). Violated carries either a cycle in the restricted
/// relation or an exhausted-search marker. Unknown when the node budget
/// runs out.
inline Verdict exists_serial_view_on(const Execution& exec,
                                     const std::set<int>& ids,
                                     const ViewQuery& q) {
  std::set<int> subset = ids;
  for (int w : exec.initial_writes) subset.insert(w);
  Relation restricted = q.relation.restricted_to(subset);

  if (auto cycle = restricted.find_cycle()) {
    CounterExample ce;
    ce.cycle = *cycle;
    ce.note = "required relation is cyclic on the view's operations";
    return Verdict::violated(std::move(ce), 0);
  }

  if (q.mode == SerialMode::Partial) {
    // Polynomial check: no write may come strictly between a read and its
    // writer in the closure of the restricted relation.
    Relation closed = restricted.transitive_closure();
    for (int r : subset) {
      const Operation& read = exec.op(r);
      if (!is_read_kind(read.kind)) continue;
      int w = exec.writer_of(r);
      for (int mid : subset) {
        const Operation& between = exec.op(mid);
        if (!is_write_kind(between.kind) || between.var != read.var) continue;
        if (mid == w || mid == r) continue;
        if (closed.contains(w, mid) && closed.contains(mid, r)) {
          CounterExample ce;
          const std::string* t1 = closed.tag(w, mid);
          const std::string* t2 = closed.tag(mid, r);
          ce.cycle = {{w, mid, t1 ? *t1 : ""}, {mid, r, t2 ? *t2 : ""}};
          ce.note = "a write intervenes between a read and its writer";
          return Verdict::violated(std::move(ce), 0);
        }
      }
    }
    Verdict v;
    v.status = Status::Satisfied;
    return v;
  }

  auto st = detail::make_state(exec, subset, restricted, q.budget);
  std::vector<int> found;
  bool have_view = false;
  st.run([&](const std::vector<int>& order) {
    found = order;
    have_view = true;
    return false;  // first view wins
  });
  if (have_view)
    return Verdict::satisfied({View{q.label, found}}, st.spent);
  if (st.out_of_budget) {
    Verdict v = Verdict::unknown(st.spent, "view search budget exhausted");
    return v;
  }
  CounterExample ce;
  ce.exhausted = true;
  ce.note = "no serial view exists (search space exhausted)";
  return Verdict::violated(std::move(ce), st.spent);
}

inline Verdict exists_serial_view(const Execution& exec, const ViewQuery& q) {
  return exists_serial_view_on(exec, detail::query_subset(exec, q.subset), q);
}

/// Enumerates every serial view of the subset respecting the relation, in
/// deterministic order. Returns false if the budget ran out (the visitor may
/// also stop enumeration early by returning false; that still counts as
/// completed). Used by the shared per-variable view construction.
inline bool for_each_serial_view(
    const Execution& exec, const std::set<int>& ids, const Relation& rel,
    long long budget, long long* spent,
    const std::function<bool(const std::vector<int>&)>& visit) {
  std::set<int> subset = ids;
  for (int w : exec.initial_writes) subset.insert(w);
  Relation restricted = rel.restricted_to(subset);
  if (restricted.find_cycle()) {
    if (spent) *spent = 0;
    return true;  // no views to visit
  }
  auto st = detail::make_state(exec, subset, restricted, budget);
  st.run(visit);
  if (spent) *spent = st.spent;
  return !st.out_of_budget;
}

/// Reference decision procedure: tries every permutation of the subset.
/// Refuses subsets larger than 9 operations. Tests and the differential
/// mode use this to cross-check the backtracking engine.
inline Verdict brute_force_oracle(const Execution& exec, const ViewQuery& q) {
  std::set<int> subset = detail::query_subset(exec, q.subset);
  if (subset.size() > 9)
    throw std::invalid_argument("brute_force_oracle: subset larger than 9");
  Relation restricted = q.relation.restricted_to(subset);
  std::vector<int> order(subset.begin(), subset.end());
  do {
    if (respects(restricted, order) && is_serial(exec, order))
      return Verdict::satisfied({View{q.label, order}}, 0);
  } while (std::next_permutation(order.begin(), order.end()));
  if (auto cycle = restricted.find_cycle()) {
    CounterExample ce;
    ce.cycle = *cycle;
    ce.note = "required relation is cyclic on the view's operations";
    return Verdict::violated(std::move(ce), 0);
  }
  CounterExample ce;
  ce.exhausted = true;
  ce.note = "no serial view exists (all permutations tried)";
  return Verdict::violated(std::move(ce), 0);
}

}  // namespace conlat
