#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conlat/orders.hpp"
#include "conlat/relation.hpp"
#include "conlat/trace.hpp"
#include "conlat/verdict.hpp"
#include "conlat/view.hpp"

namespace conlat {

/// A lattice point: a set of consistency properties. GAO is strictly
/// stronger than GDO, and GPO or GDO subsume GPDO, so sets are kept
/// normalized (no redundant member).
struct ModelNode {
  std::set<Property> props;

  friend bool operator==(const ModelNode& a, const ModelNode& b) {
    return a.props == b.props;
  }
  friend bool operator<(const ModelNode& a, const ModelNode& b) {
    return a.props < b.props;
  }
};

inline std::set<Property> normalize(std::set<Property> props) {
  if (props.count(Property::GAO)) props.erase(Property::GDO);
  if (props.count(Property::GPO) || props.count(Property::GDO) ||
      props.count(Property::GAO))
    props.erase(Property::GPDO);
  return props;
}

/// Closes a property set under implication: GAO ⟹ GDO ⟹ GPDO, GPO ⟹ GPDO.
inline std::set<Property> expand(std::set<Property> props) {
  if (props.count(Property::GAO)) props.insert(Property::GDO);
  if (props.count(Property::GPO) || props.count(Property::GDO))
    props.insert(Property::GPDO);
  return props;
}

enum class Comparison { Equivalent, Stronger, Weaker, Incomparable };

inline const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::Equivalent: return "equivalent";
    case Comparison::Stronger: return "stronger";
    case Comparison::Weaker: return "weaker";
    case Comparison::Incomparable: return "incomparable";
  }
  return "?";
}

inline Comparison compare(const ModelNode& a, const ModelNode& b) {
  std::set<Property> ea = expand(a.props), eb = expand(b.props);
  bool a_sup = std::includes(ea.begin(), ea.end(), eb.begin(), eb.end());
  bool b_sup = std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
  if (a_sup && b_sup) return Comparison::Equivalent;
  if (a_sup) return Comparison::Stronger;
  if (b_sup) return Comparison::Weaker;
  return Comparison::Incomparable;
}

inline ModelNode lub(const ModelNode& a, const ModelNode& b) {
  std::set<Property> u = a.props;
  u.insert(b.props.begin(), b.props.end());
  return ModelNode{normalize(std::move(u))};
}

inline ModelNode glb(const ModelNode& a, const ModelNode& b) {
  std::set<Property> na = normalize(a.props), nb = normalize(b.props);
  std::set<Property> out;
  for (Property p : na)
    if (nb.count(p)) out.insert(p);
  return ModelNode{normalize(std::move(out))};
}

/// All 13 lattice nodes, strongest first. `local` (the empty set) is last.
inline const std::vector<ModelNode>& lattice_nodes() {
  using P = Property;
  static const std::vector<ModelNode> kNodes = {
      {{P::GPO, P::GWO, P::GAO}},  // sequential
      {{P::GPO, P::GDO, P::GWO}},
      {{P::GPO, P::GAO}},
      {{P::GWO, P::GAO}},
      {{P::GPO, P::GDO}},
      {{P::GPO, P::GWO}},  // causal
      {{P::GDO, P::GWO}},
      {{P::GAO}},
      {{P::GPO}},  // pram
      {{P::GDO}},  // cache
      {{P::GWO}},
      {{P::GPDO}},  // slow
      {{}},         // local
  };
  return kNodes;
}

inline std::string canonical_name(const ModelNode& node) {
  using P = Property;
  std::set<Property> n = normalize(node.props);
  if (n == std::set<P>{P::GPO, P::GWO, P::GAO}) return "sequential";
  if (n == std::set<P>{P::GPO, P::GWO}) return "causal";
  if (n == std::set<P>{P::GPO}) return "pram";
  if (n == std::set<P>{P::GDO}) return "cache";
  if (n == std::set<P>{P::GPDO}) return "slow";
  if (n.empty()) return "local";
  std::string out;
  for (P p : {P::GPO, P::GDO, P::GWO, P::GAO, P::GPDO}) {
    if (!n.count(p)) continue;
    if (!out.empty()) out += "+";
    std::string s = to_string(p);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out += s;
  }
  return out;
}

/// A parsed model name: a lattice node, or one of the two models that are
/// deliberately not lattice nodes.
struct ModelRef {
  enum class Kind { Node, Processor, Intersection } kind = Kind::Node;
  ModelNode node;  // meaningful for Kind::Node
};

inline std::optional<ModelRef> parse_model_name(std::string name) {
  for (char& c : name)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (name == "processor") return ModelRef{ModelRef::Kind::Processor, {}};
  if (name == "gpo^gdo") return ModelRef{ModelRef::Kind::Intersection, {}};

  static const std::map<std::string, std::set<Property>> kAliases = {
      {"sequential", {Property::GPO, Property::GWO, Property::GAO}},
      {"causal", {Property::GPO, Property::GWO}},
      {"pram", {Property::GPO}},
      {"cache", {Property::GDO}},
      {"slow", {Property::GPDO}},
      {"local", {}},
      {"gpo", {Property::GPO}},
      {"gdo", {Property::GDO}},
      {"gwo", {Property::GWO}},
      {"gao", {Property::GAO}},
      {"gpdo", {Property::GPDO}},
  };
  std::set<Property> props;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t plus = name.find('+', pos);
    std::string part = name.substr(
        pos, plus == std::string::npos ? std::string::npos : plus - pos);
    auto it = kAliases.find(part);
    if (it == kAliases.end()) return std::nullopt;
    props.insert(it->second.begin(), it->second.end());
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return ModelRef{ModelRef::Kind::Node, ModelNode{normalize(std::move(props))}};
}

struct CheckOptions {
  long long view_budget = 1'000'000;  // nodes per view search
  SerialOrderOptions so = {};         // pair cap 20, forced-choice pruning on
  long long augmentation_cap = 100'000;
  bool use_oracle = false;  // decide each view query by brute force instead
};

namespace detail {

inline Verdict run_view_query(const Execution& exec, const ViewQuery& q,
                              const CheckOptions& opts) {
  if (opts.use_oracle) return brute_force_oracle(exec, q);
  return exists_serial_view(exec, q);
}

/// Conjunction over view queries: any Violated wins, else any Unknown, else
/// Satisfied with all witness views. Budgets are summed.
inline Verdict all_of(const Execution& exec, const std::vector<ViewQuery>& qs,
                      const CheckOptions& opts) {
  long long spent = 0;
  std::vector<View> views;
  std::optional<Verdict> unknown;
  for (const auto& q : qs) {
    Verdict v = run_view_query(exec, q, opts);
    spent += v.budget_spent;
    if (v.status == Status::Violated) {
      v.counterexample->note =
          "view '" + q.label + "': " + v.counterexample->note;
      v.budget_spent = spent;
      return v;
    }
    if (v.status == Status::Unknown && !unknown) unknown = v;
    for (auto& w : v.witness) views.push_back(std::move(w));
  }
  if (unknown) {
    unknown->budget_spent = spent;
    return *unknown;
  }
  return Verdict::satisfied(std::move(views), spent);
}

/// The standard per-process query family: process i's operations plus all
/// writes, respecting iLocal and `rel`.
inline std::vector<ViewQuery> per_process_queries(const Execution& exec,
                                                  const Relation& rel,
                                                  long long budget) {
  std::vector<ViewQuery> qs;
  for (const auto& proc : exec.processes) {
    ViewQuery q;
    OperationPattern own;
    own.proc = proc;
    OperationPattern writes;
    writes.kind = OperationPattern::KindSel::AnyWrite;
    q.subset = {own, writes};
    q.relation = exec.local_order(proc).united(rel);
    q.budget = budget;
    q.label = proc;
    qs.push_back(std::move(q));
  }
  return qs;
}

}  // namespace detail

inline Relation property_relation(const Execution& exec, Property p) {
  switch (p) {
    case Property::GPO: return exec.po;
    case Property::GDO: return data_order(exec);
    case Property::GWO: return write_read_write_order(exec);
    case Property::GPDO: return process_data_order(exec);
    case Property::GAO: break;  // needs a serial order; handled by callers
  }
  return Relation();
}

/// Decides one lattice node: for every process a serial view of its own ops
/// plus all writes must respect the union of the node's property relations.
/// GAO nodes existentially pick one serial order shared by all processes.
inline Verdict check_node(const Execution& exec, const ModelNode& node_in,
                          const CheckOptions& opts = {}) {
  std::set<Property> props = normalize(node_in.props);
  Relation base;
  for (Property p : props)
    if (p != Property::GAO) base = base.united(property_relation(exec, p));

  if (!props.count(Property::GAO))
    return detail::all_of(
        exec, detail::per_process_queries(exec, base, opts.view_budget), opts);

  Relation dord = data_order(exec);
  long long spent = 0;

  // The undetermined-pair cap is checked before anything else so that an
  // over-budget trace is reported Unknown, never decided by a lucky branch.
  {
    auto pairs = serial_order_pairs(exec, [](int) { return true; });
    long long undetermined = 0;
    for (const auto& p : pairs)
      if (!opts.so.prune_forced || !p.forced) ++undetermined;
    if (undetermined > opts.so.pair_cap)
      return Verdict::unknown(
          0, "serial-order enumeration exceeded the undetermined-pair cap");
  }

  // Fast refutation: every serial order contains the forced-pair edges, and
  // the anti order grows with the serial order, so a violation against this
  // common core is a violation in every branch.
  if (opts.so.prune_forced) {
    Relation forced;
    for (const auto& p : serial_order_pairs(exec, [](int) { return true; }))
      if (p.forced) forced.add(p.write, p.writer, "SO");
    Relation core = base.united(forced).united(anti_order(exec, forced, dord));
    Verdict pre = detail::all_of(
        exec, detail::per_process_queries(exec, core, opts.view_budget), opts);
    spent += pre.budget_spent;
    if (pre.status == Status::Violated) {
      pre.budget_spent = spent;
      return pre;
    }
  }

  std::optional<Verdict> satisfied, violated;
  bool saw_unknown = false;
  auto in_scope = [](int) { return true; };
  auto enumeration = for_each_serial_order(
      exec, in_scope, opts.so, [&](const Relation& so) {
        Relation rel = base.united(so).united(anti_order(exec, so, dord));
        Verdict v = detail::all_of(
            exec, detail::per_process_queries(exec, rel, opts.view_budget),
            opts);
        spent += v.budget_spent;
        if (v.status == Status::Satisfied) {
          satisfied = std::move(v);
          return false;
        }
        if (v.status == Status::Unknown)
          saw_unknown = true;
        else if (!violated)
          violated = std::move(v);
        return true;
      });
  if (enumeration.capped)
    return Verdict::unknown(
        spent, "serial-order enumeration exceeded the undetermined-pair cap");
  if (satisfied) {
    satisfied->budget_spent = spent;
    return *satisfied;
  }
  if (saw_unknown)
    return Verdict::unknown(spent,
                            "view search budget exhausted in a serial-order "
                            "branch; no branch satisfied");
  violated->counterexample->note =
      "no serial order admits the views; first branch: " +
      violated->counterexample->note;
  violated->budget_spent = spent;
  return *violated;
}

/// Checks one of the named models via its direct per-view formulation
/// instead of lattice properties; used to cross-validate the equivalence
/// theorems.
inline Verdict check_classical(const Execution& exec, const std::string& name,
                               const CheckOptions& opts = {});

/// Processor consistency: program order plus an augmented (per-variable
/// total) data order must admit per-process views for some augmentation.
inline Verdict check_processor(const Execution& exec,
                               const CheckOptions& opts = {}) {
  long long spent = 0;
  std::optional<Verdict> satisfied, violated;
  bool saw_unknown = false;
  auto enumeration = for_each_augmented_data_order(
      exec, opts.augmentation_cap, [&](const Relation& aug) {
        Relation rel = exec.po.united(aug);
        Verdict v = detail::all_of(
            exec, detail::per_process_queries(exec, rel, opts.view_budget),
            opts);
        spent += v.budget_spent;
        if (v.status == Status::Satisfied) {
          satisfied = std::move(v);
          return false;
        }
        if (v.status == Status::Unknown)
          saw_unknown = true;
        else if (!violated)
          violated = std::move(v);
        return true;
      });
  if (enumeration.cyclic) {
    Relation dord = data_order(exec);
    CounterExample ce;
    ce.cycle = *dord.find_cycle();
    ce.note = "data order is cyclic; no augmentation exists";
    return Verdict::violated(std::move(ce), spent);
  }
  if (enumeration.capped)
    return Verdict::unknown(spent,
                            "augmented data order enumeration exceeded cap");
  if (satisfied) {
    satisfied->budget_spent = spent;
    return *satisfied;
  }
  if (saw_unknown)
    return Verdict::unknown(spent,
                            "view search budget exhausted in an augmentation "
                            "branch; no branch satisfied");
  violated->counterexample->note =
      "no augmented data order admits the views; first branch: " +
      violated->counterexample->note;
  violated->budget_spent = spent;
  return *violated;
}

/// GPO ∩ GDO: the per-process view families for GPO and for GDO exist
/// independently (weaker than GPO+GDO, which demands a single family).
inline Verdict check_intersection(const Execution& exec,
                                  const CheckOptions& opts = {}) {
  Verdict gpo = check_node(exec, ModelNode{{Property::GPO}}, opts);
  Verdict gdo = check_node(exec, ModelNode{{Property::GDO}}, opts);
  long long spent = gpo.budget_spent + gdo.budget_spent;
  for (Verdict* v : {&gpo, &gdo}) {
    if (v->status == Status::Violated) {
      v->budget_spent = spent;
      return *v;
    }
  }
  if (gpo.status == Status::Unknown || gdo.status == Status::Unknown)
    return Verdict::unknown(spent, "component check ran out of budget");
  std::vector<View> views;
  for (auto& w : gpo.witness) {
    w.label = "gpo:" + w.label;
    views.push_back(std::move(w));
  }
  for (auto& w : gdo.witness) {
    w.label = "gdo:" + w.label;
    views.push_back(std::move(w));
  }
  return Verdict::satisfied(std::move(views), spent);
}

inline Verdict check_classical(const Execution& exec, const std::string& name,
                               const CheckOptions& opts) {
  auto query = [&](std::vector<OperationPattern> subset, const Relation& rel,
                   std::string label) {
    ViewQuery q;
    q.subset = std::move(subset);
    q.relation = rel;
    q.budget = opts.view_budget;
    q.label = std::move(label);
    return q;
  };
  OperationPattern any_write;
  any_write.kind = OperationPattern::KindSel::AnyWrite;

  if (name == "sequential") {
    return detail::all_of(exec, {query({OperationPattern{}}, exec.po, "all")},
                          opts);
  }
  if (name == "pram") {
    return detail::all_of(
        exec, detail::per_process_queries(exec, exec.po, opts.view_budget),
        opts);
  }
  if (name == "cache") {
    std::vector<ViewQuery> qs;
    for (const auto& var : exec.variables) {
      OperationPattern on_var;
      on_var.var = var;
      qs.push_back(query({on_var}, exec.po, var));
    }
    return detail::all_of(exec, qs, opts);
  }
  if (name == "causal") {
    return detail::all_of(
        exec,
        detail::per_process_queries(exec, causal_relation(exec),
                                    opts.view_budget),
        opts);
  }
  if (name == "slow") {
    std::vector<ViewQuery> qs;
    for (const auto& proc : exec.processes)
      for (const auto& var : exec.variables) {
        OperationPattern own;
        own.proc = proc;
        own.var = var;
        OperationPattern writes = any_write;
        writes.var = var;
        ViewQuery q = query({own, writes}, exec.po, proc + "/" + var);
        qs.push_back(std::move(q));
      }
    return detail::all_of(exec, qs, opts);
  }
  if (name == "local") {
    std::vector<ViewQuery> qs;
    for (const auto& proc : exec.processes) {
      OperationPattern own;
      own.proc = proc;
      qs.push_back(
          query({own, any_write}, exec.local_order(proc), proc));
    }
    return detail::all_of(exec, qs, opts);
  }
  if (name == "processor") {
    // Per-variable serial views of program order, all mutually consistent
    // with the per-process views: enumerate each variable's views and try
    // every combination.
    long long spent = 0;
    std::vector<std::vector<std::vector<int>>> per_var;
    for (const auto& var : exec.variables) {
      OperationPattern on_var;
      on_var.var = var;
      std::set<int> ids = select(exec, {on_var});
      std::vector<std::vector<int>> views;
      long long used = 0;
      bool within = for_each_serial_view(
          exec, ids, exec.po, opts.view_budget, &used,
          [&](const std::vector<int>& order) {
            views.push_back(order);
            return static_cast<long long>(views.size()) <=
                   opts.augmentation_cap;
          });
      spent += used;
      if (!within ||
          static_cast<long long>(views.size()) > opts.augmentation_cap)
        return Verdict::unknown(spent,
                                "per-variable view enumeration exceeded cap");
      per_var.push_back(std::move(views));
    }
    for (const auto& views : per_var) {
      if (views.empty()) {
        CounterExample ce;
        ce.exhausted = true;
        ce.note = "some variable admits no serial view of program order";
        return Verdict::violated(std::move(ce), spent);
      }
    }
    std::optional<Verdict> satisfied, violated;
    bool saw_unknown = false;
    std::vector<std::size_t> pick(per_var.size(), 0);
    auto rec = [&](auto&& self, std::size_t v) -> bool {
      if (v == per_var.size()) {
        Relation rel = exec.po;
        for (std::size_t i = 0; i < per_var.size(); ++i) {
          const auto& order = per_var[i][pick[i]];
          for (std::size_t a = 0; a < order.size(); ++a)
            for (std::size_t b = a + 1; b < order.size(); ++b)
              rel.add(order[a], order[b], "var-view");
        }
        Verdict res = detail::all_of(
            exec, detail::per_process_queries(exec, rel, opts.view_budget),
            opts);
        spent += res.budget_spent;
        if (res.status == Status::Satisfied) {
          satisfied = std::move(res);
          return false;
        }
        if (res.status == Status::Unknown)
          saw_unknown = true;
        else if (!violated)
          violated = std::move(res);
        return true;
      }
      for (std::size_t i = 0; i < per_var[v].size(); ++i) {
        pick[v] = i;
        if (!self(self, v + 1)) return false;
      }
      return true;
    };
    rec(rec, 0);
    if (satisfied) {
      satisfied->budget_spent = spent;
      return *satisfied;
    }
    if (saw_unknown)
      return Verdict::unknown(spent, "budget exhausted across combinations");
    if (violated) {
      violated->counterexample->note =
          "no combination of per-variable views works; first: " +
          violated->counterexample->note;
      violated->budget_spent = spent;
      return *violated;
    }
    // No variables at all: trivially satisfied.
    return detail::all_of(
        exec, detail::per_process_queries(exec, exec.po, opts.view_budget),
        opts);
  }
  throw std::invalid_argument("check_classical: unknown model '" + name + "'");
}

struct ClassifyResult {
  std::vector<std::pair<ModelNode, Verdict>> nodes;  // lattice order
  std::vector<ModelNode> maximal;                    // antichain of strongest
  bool any_unknown = false;
};

/// Evaluates every lattice node and reports the maximal satisfied ones.
inline ClassifyResult classify(const Execution& exec,
                               const CheckOptions& opts = {}) {
  ClassifyResult out;
  for (const auto& node : lattice_nodes()) {
    Verdict v = check_node(exec, node, opts);
    if (v.status == Status::Unknown) out.any_unknown = true;
    out.nodes.emplace_back(node, std::move(v));
  }
  for (const auto& [node, verdict] : out.nodes) {
    if (verdict.status != Status::Satisfied) continue;
    bool dominated = false;
    for (const auto& [other, ov] : out.nodes) {
      if (ov.status != Status::Satisfied || other == node) continue;
      if (compare(other, node) == Comparison::Stronger) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.maximal.push_back(node);
  }
  return out;
}

}  // namespace conlat
