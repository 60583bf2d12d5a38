#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace conlat {

/// One directed edge between operation ids, with a provenance tag naming
/// the order that produced it (e.g. "PO", "DO:deduced", "SO").
struct Edge {
  int from = 0;
  int to = 0;
  std::string tag;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.from == b.from && a.to == b.to && a.tag == b.tag;
  }
};

/// A binary relation over operation ids. All mutating operations return new
/// relations; a built relation is safe to share across threads.
class Relation {
 public:
  Relation() = default;

  /// Adds edge (from, to). The first tag wins if the edge already exists.
  void add(int from, int to, std::string_view tag) {
    adj_[from].emplace(to, std::string(tag));
  }

  bool contains(int from, int to) const {
    auto it = adj_.find(from);
    return it != adj_.end() && it->second.count(to) > 0;
  }

  const std::string* tag(int from, int to) const {
    auto it = adj_.find(from);
    if (it == adj_.end()) return nullptr;
    auto jt = it->second.find(to);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [from, succ] : adj_) n += succ.size();
    return n;
  }

  bool empty() const { return adj_.empty(); }

  /// Successors of `from`, sorted by target id.
  const std::map<int, std::string>& successors(int from) const {
    static const std::map<int, std::string> kEmpty;
    auto it = adj_.find(from);
    return it == adj_.end() ? kEmpty : it->second;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (const auto& [from, succ] : adj_)
      for (const auto& [to, t] : succ) out.push_back({from, to, t});
    return out;
  }

  /// Every id that appears as an endpoint.
  std::set<int> nodes() const {
    std::set<int> out;
    for (const auto& [from, succ] : adj_) {
      out.insert(from);
      for (const auto& [to, t] : succ) out.insert(to);
    }
    return out;
  }

  Relation united(const Relation& other) const {
    Relation out = *this;
    for (const auto& [from, succ] : other.adj_)
      for (const auto& [to, t] : succ) out.add(from, to, t);
    return out;
  }

  /// Edges whose endpoints both lie in `ids` (appendix restriction).
  Relation restricted_to(const std::set<int>& ids) const {
    Relation out;
    for (const auto& [from, succ] : adj_) {
      if (!ids.count(from)) continue;
      for (const auto& [to, t] : succ)
        if (ids.count(to)) out.add(from, to, t);
    }
    return out;
  }

  /// Edges (a, b) present in both relations, keeping this relation's tags.
  Relation intersected(const Relation& other) const {
    Relation out;
    for (const auto& [from, succ] : adj_)
      for (const auto& [to, t] : succ)
        if (other.contains(from, to)) out.add(from, to, t);
    return out;
  }

  /// Least transitive superset. Derived edges are tagged `closure_tag`.
  Relation transitive_closure(std::string_view closure_tag = "closure") const {
    Relation out = *this;
    std::vector<int> all;
    for (int n : nodes()) all.push_back(n);
    for (int mid : all) {
      std::vector<int> preds, succs;
      for (int a : all)
        if (out.contains(a, mid)) preds.push_back(a);
      for (const auto& [to, t] : out.successors(mid)) succs.push_back(to);
      for (int a : preds)
        for (int b : succs)
          if (!out.contains(a, b)) out.add(a, b, closure_tag);
    }
    return out;
  }

  /// A concrete cycle as an edge sequence, if any exists.
  std::optional<std::vector<Edge>> find_cycle() const {
    enum class Mark { White, Grey, Black };
    std::map<int, Mark> mark;
    std::vector<int> stack;
    std::optional<std::vector<Edge>> result;

    auto dfs = [&](auto&& self, int node) -> bool {
      mark[node] = Mark::Grey;
      stack.push_back(node);
      for (const auto& [to, t] : successors(node)) {
        Mark m = mark.count(to) ? mark[to] : Mark::White;
        if (m == Mark::Grey) {
          // Found a back edge; slice the cycle out of the stack.
          auto start = std::find(stack.begin(), stack.end(), to);
          std::vector<Edge> cycle;
          for (auto it = start; it != stack.end(); ++it) {
            // Each edge leads to the next stack entry; the last closes back.
            int a = *it;
            int b = std::next(it) == stack.end() ? to : *std::next(it);
            const std::string* tg = tag(a, b);
            cycle.push_back({a, b, tg ? *tg : std::string()});
          }
          result = std::move(cycle);
          return true;
        }
        if (m == Mark::White && self(self, to)) return true;
      }
      stack.pop_back();
      mark[node] = Mark::Black;
      return false;
    };

    for (int n : nodes()) {
      Mark m = mark.count(n) ? mark[n] : Mark::White;
      if (m == Mark::White && dfs(dfs, n)) return result;
    }
    return std::nullopt;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    if (a.edge_count() != b.edge_count()) return false;
    for (const auto& [from, succ] : a.adj_)
      for (const auto& [to, t] : succ)
        if (!b.contains(from, to)) return false;
    return true;
  }

 private:
  std::map<int, std::map<int, std::string>> adj_;
};

/// Linearizes `universe` respecting `rel`, smallest id first among ready
/// nodes. Returns nothing when `rel` is cyclic on `universe`.
inline std::optional<std::vector<int>> topo_sort(
    const Relation& rel, const std::vector<int>& universe) {
  std::set<int> pending(universe.begin(), universe.end());
  std::map<int, int> indeg;
  for (int n : pending) indeg[n] = 0;
  for (int n : pending)
    for (const auto& [to, t] : rel.successors(n))
      if (pending.count(to)) ++indeg[to];

  std::set<int> ready;  // ordered: ascending-id tiebreak
  for (auto& [n, d] : indeg)
    if (d == 0) ready.insert(n);

  std::vector<int> order;
  order.reserve(universe.size());
  while (!ready.empty()) {
    int n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& [to, t] : rel.successors(n)) {
      auto it = indeg.find(to);
      if (it != indeg.end() && --it->second == 0) ready.insert(to);
    }
  }
  if (order.size() != universe.size()) return std::nullopt;
  return order;
}

}  // namespace conlat
