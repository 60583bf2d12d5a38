#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conlat/relation.hpp"

namespace conlat {

enum class Status { Satisfied, Violated, Unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Satisfied: return "satisfied";
    case Status::Violated: return "violated";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

/// A witness view: operation ids in view order, labelled by what the view
/// is for (usually a process name).
struct View {
  std::string label;
  std::vector<int> order;

  friend bool operator==(const View& a, const View& b) {
    return a.label == b.label && a.order == b.order;
  }
};

/// Evidence for a violation: either a cycle in the required relation, or a
/// marker that the search space was exhausted without finding a view.
struct CounterExample {
  std::vector<Edge> cycle;  // empty when exhausted
  bool exhausted = false;
  std::string note;

  friend bool operator==(const CounterExample& a, const CounterExample& b) {
    return a.cycle == b.cycle && a.exhausted == b.exhausted && a.note == b.note;
  }
};

struct Verdict {
  Status status = Status::Unknown;
  std::vector<View> witness;                     // non-empty only if Satisfied
  std::optional<CounterExample> counterexample;  // present iff Violated
  std::string note;                              // e.g. why Unknown
  long long budget_spent = 0;                    // search nodes across queries

  static Verdict satisfied(std::vector<View> views, long long spent) {
    Verdict v;
    v.status = Status::Satisfied;
    v.witness = std::move(views);
    v.budget_spent = spent;
    return v;
  }
  static Verdict violated(CounterExample ce, long long spent) {
    Verdict v;
    v.status = Status::Violated;
    v.counterexample = std::move(ce);
    v.budget_spent = spent;
    return v;
  }
  static Verdict unknown(long long spent, std::string why = {}) {
    Verdict v;
    v.status = Status::Unknown;
    v.budget_spent = spent;
    v.note = std::move(why);
    return v;
  }

  friend bool operator==(const Verdict& a, const Verdict& b) {
    return a.status == b.status && a.witness == b.witness &&
           a.counterexample == b.counterexample && a.note == b.note &&
           a.budget_spent == b.budget_spent;
  }
};

}  // namespace conlat
