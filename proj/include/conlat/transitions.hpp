#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "conlat/lattice.hpp"
#include "conlat/orders.hpp"
#include "conlat/relation.hpp"
#include "conlat/trace.hpp"
#include "conlat/verdict.hpp"
#include "conlat/view.hpp"

namespace conlat {

enum class SyncModelKind { Weak, Release, LazyRelease, Entry, Scope, Location };
enum class Variant { Original, Revised };

inline const char* to_string(SyncModelKind k) {
  switch (k) {
    case SyncModelKind::Weak: return "weak";
    case SyncModelKind::Release: return "release";
    case SyncModelKind::LazyRelease: return "lazy-release";
    case SyncModelKind::Entry: return "entry";
    case SyncModelKind::Scope: return "scope";
    case SyncModelKind::Location: return "location";
  }
  return "?";
}

/// Raised when a trace cannot be checked under the requested model (wrong
/// sync-op kinds, inconsistent variable association).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-operation consistency labels plus the D order between ordinary and
/// synchronization operations.
struct Labeling {
  std::map<int, std::set<Property>> labels;
  Relation D;
  Variant variant = Variant::Revised;

  bool has(int id, Property p) const {
    auto it = labels.find(id);
    return it != labels.end() && it->second.count(p) > 0;
  }
};

namespace detail {

inline std::set<std::string> sync_variables(const Execution& exec) {
  std::set<std::string> vars;
  for (const auto& op : exec.ops)
    if (is_sync_kind(op.kind)) vars.insert(op.var);
  return vars;
}

inline bool sync_like(const Execution& exec, const Operation& op) {
  // Initial writes of a synchronization variable count as sync writes: sync
  // reads of the initial value map to them.
  if (is_sync_kind(op.kind)) return true;
  return op.is_initial() && sync_variables(exec).count(op.var) > 0;
}

}  // namespace detail

/// Default labeling: synchronization operations (and the initial writes of
/// sync variables) get {GPO, GWO, GAO}; ordinary operations get {GPDO}.
inline Labeling default_labeling(const Execution& exec,
                                 Variant variant = Variant::Revised) {
  Labeling lab;
  lab.variant = variant;
  std::set<std::string> svars = detail::sync_variables(exec);
  for (const auto& op : exec.ops) {
    bool sync = is_sync_kind(op.kind) ||
                (op.is_initial() && svars.count(op.var) > 0);
    lab.labels[op.id] = sync ? std::set<Property>{Property::GPO, Property::GWO,
                                                  Property::GAO}
                             : std::set<Property>{Property::GPDO};
  }
  return lab;
}

inline Labeling uniform_labeling(const Execution& exec,
                                 const std::set<Property>& props) {
  Labeling lab;
  for (const auto& op : exec.ops) lab.labels[op.id] = props;
  return lab;
}

/// Labeling from `!PROP` trace annotations; unlabeled ops (and initial
/// writes) fall back to the defaults for their kind.
inline Labeling trace_labeling(const Execution& exec) {
  Labeling lab = default_labeling(exec);
  for (const auto& op : exec.ops)
    if (!op.labels.empty()) lab.labels[op.id] = op.labels;
  return lab;
}

namespace detail {

inline void require_kinds(const Execution& exec, SyncModelKind kind) {
  for (const auto& op : exec.ops) {
    if (kind == SyncModelKind::Weak) {
      if (op.kind == Kind::Acquire || op.kind == Kind::Release)
        throw ModelError(
            "weak consistency expects sr/sw sync ops, found acq/rel on line " +
            std::to_string(op.line));
    } else {
      if (op.kind == Kind::SyncRead || op.kind == Kind::SyncWrite)
        throw ModelError(std::string(to_string(kind)) +
                         " consistency expects acq/rel sync ops, found sr/sw "
                         "on line " +
                         std::to_string(op.line));
    }
  }
}

/// Static variable association for entry-style models, read off @ tags on
/// ordinary operations. Must be consistent per variable.
inline std::map<std::string, std::string> association(const Execution& exec) {
  std::map<std::string, std::string> assoc;
  for (const auto& op : exec.ops) {
    if (is_sync_kind(op.kind) || !op.sync_var) continue;
    auto [it, inserted] = assoc.emplace(op.var, *op.sync_var);
    if (!inserted && it->second != *op.sync_var)
      throw ModelError("variable '" + op.var +
                       "' associated with two sync variables ('" + it->second +
                       "' and '" + *op.sync_var + "')");
  }
  return assoc;
}

// True when some sync op on `var` sits strictly between a and b in the
// process order chain of a's (equivalently b's) process.
inline bool sync_between(const Execution& exec, int a, int b,
                         const std::string& var) {
  for (const auto& op : exec.ops) {
    if (!is_sync_kind(op.kind) || op.var != var) continue;
    if (exec.po.contains(a, op.id) && exec.po.contains(op.id, b)) return true;
  }
  return false;
}

}  // namespace detail

/// The D order of one synchronized model: which ordinary operations must
/// come before or after which synchronization operations. `synch` is only
/// used by lazy release, whose D depends on release-to-acquire chains; pass
/// the current synchronization order (the chain is closed to a fixpoint with
/// D itself and writes-to between sync ops).
inline Relation build_D(const Execution& exec, SyncModelKind kind,
                        const Relation& synch = Relation()) {
  detail::require_kinds(exec, kind);
  Relation d;
  auto ordinary = [&](const Operation& op) {
    return !is_sync_kind(op.kind);
  };

  switch (kind) {
    case SyncModelKind::Weak:
      for (const auto& s : exec.ops) {
        if (!is_sync_kind(s.kind)) continue;
        for (const auto& o : exec.ops) {
          if (!ordinary(o)) continue;
          if (exec.po.contains(o.id, s.id)) d.add(o.id, s.id, "D");
          if (exec.po.contains(s.id, o.id)) d.add(s.id, o.id, "D");
        }
      }
      break;

    case SyncModelKind::Release:
      for (const auto& s : exec.ops) {
        if (s.kind == Kind::Acquire) {
          for (const auto& o : exec.ops)
            if (ordinary(o) && exec.po.contains(s.id, o.id))
              d.add(s.id, o.id, "D");
        } else if (s.kind == Kind::Release) {
          for (const auto& o : exec.ops)
            if (ordinary(o) && exec.po.contains(o.id, s.id))
              d.add(o.id, s.id, "D");
        }
      }
      break;

    case SyncModelKind::LazyRelease: {
      for (const auto& s : exec.ops) {
        if (s.kind != Kind::Acquire) continue;
        for (const auto& o : exec.ops)
          if (ordinary(o) && exec.po.contains(s.id, o.id))
            d.add(s.id, o.id, "D");
      }
      // o <_D acq when some release chains to the acquire and o precedes
      // that release in program order. The chain may pass through D and
      // synch edges and through writes-to between sync ops, and grows as D
      // grows, so iterate to a fixpoint.
      Relation chain_base = synch;
      for (const auto& [r, w] : exec.writes_to)
        if (is_sync_kind(exec.op(r).kind) && is_sync_kind(exec.op(w).kind))
          chain_base.add(w, r, "WT");
      bool changed = true;
      while (changed) {
        changed = false;
        Relation chain = chain_base.united(d).transitive_closure();
        for (const auto& a : exec.ops) {
          if (a.kind != Kind::Acquire) continue;
          for (const auto& rel_op : exec.ops) {
            if (rel_op.kind != Kind::Release) continue;
            if (!chain.contains(rel_op.id, a.id)) continue;
            for (const auto& o : exec.ops) {
              if (!ordinary(o) || !exec.po.contains(o.id, rel_op.id)) continue;
              if (!d.contains(o.id, a.id)) {
                d.add(o.id, a.id, "D:lazy");
                changed = true;
              }
            }
          }
        }
      }
      break;
    }

    case SyncModelKind::Entry:
    case SyncModelKind::Location: {
      auto assoc = detail::association(exec);
      for (const auto& s : exec.ops) {
        if (!is_sync_kind(s.kind)) continue;
        for (const auto& o : exec.ops) {
          if (!ordinary(o)) continue;
          auto it = assoc.find(o.var);
          if (it == assoc.end() || it->second != s.var) continue;
          if (s.kind == Kind::Acquire && exec.po.contains(s.id, o.id))
            d.add(s.id, o.id, "D");
          if (s.kind == Kind::Release && exec.po.contains(o.id, s.id))
            d.add(o.id, s.id, "D");
        }
      }
      break;
    }

    case SyncModelKind::Scope:
      // Dynamic association: only the most recent acquire and the next
      // release to each sync variable order an ordinary op.
      for (const auto& s : exec.ops) {
        if (!is_sync_kind(s.kind)) continue;
        for (const auto& o : exec.ops) {
          if (!ordinary(o)) continue;
          if (s.kind == Kind::Acquire && exec.po.contains(s.id, o.id) &&
              !detail::sync_between(exec, s.id, o.id, s.var))
            d.add(s.id, o.id, "D");
          if (s.kind == Kind::Release && exec.po.contains(o.id, s.id) &&
              !detail::sync_between(exec, o.id, s.id, s.var))
            d.add(o.id, s.id, "D");
        }
      }
      break;
  }
  return d;
}

/// Synchronization order over labeled operations: two ops are related by a
/// property's order only when both carry that property's label.
inline Relation synch_order(const Execution& exec, const Labeling& lab,
                            const Relation& so) {
  Relation dord = data_order(exec);
  Relation out;
  auto both = [&](int a, int b, Property p) {
    return lab.has(a, p) && lab.has(b, p);
  };
  auto filter = [&](const Relation& rel, Property p, const char* tag) {
    for (const auto& e : rel.edges())
      if (both(e.from, e.to, p)) out.add(e.from, e.to, tag);
  };
  filter(exec.po, Property::GPO, "synch:PO");
  filter(dord, Property::GDO, "synch:DO");
  filter(write_read_write_order(exec), Property::GWO, "synch:WO");
  filter(so, Property::GAO, "synch:SO");
  filter(anti_order(exec, so, dord), Property::GAO, "synch:AO");
  filter(process_data_order(exec), Property::GPDO, "synch:PDO");
  return out;
}

/// Transitive order: transfers D constraints across chains of sync
/// operations so views that omit other processes' sync reads still respect
/// the closure of D and synch.
inline Relation transitive_order(const Execution& exec, const Relation& d,
                                 const Relation& synch) {
  Relation synchp = synch.transitive_closure();
  Relation t;
  auto sync_read = [&](const Operation& op) {
    return is_sync_kind(op.kind) && is_read_kind(op.kind);
  };
  auto sync_write = [&](const Operation& op) {
    return is_sync_kind(op.kind) && is_write_kind(op.kind);
  };
  for (const auto& sr : exec.ops) {
    if (!sync_read(sr)) continue;
    // Clause 1: o <_D sr <_synch+ sw.
    for (const auto& o : exec.ops) {
      if (!d.contains(o.id, sr.id)) continue;
      for (const auto& [sw, tag] : synchp.successors(sr.id))
        if (sync_write(exec.op(sw))) t.add(o.id, sw, "T:1");
    }
    // Clause 2: sw <_synch+ sr <_D o.
    for (const auto& sw : exec.ops) {
      if (!sync_write(sw) || !synchp.contains(sw.id, sr.id)) continue;
      for (const auto& [o, tag] : d.successors(sr.id)) t.add(sw.id, o, "T:2");
    }
    // Clause 3: o1 <_D sr <_D o2.
    for (const auto& o1 : exec.ops) {
      if (!d.contains(o1.id, sr.id)) continue;
      for (const auto& [o2, tag] : d.successors(sr.id))
        t.add(o1.id, o2, "T:3");
    }
    // Clause 4: o1 <_D sr <_synch+ sr2 <_D o2.
    for (const auto& o1 : exec.ops) {
      if (!d.contains(o1.id, sr.id)) continue;
      for (const auto& [sr2, tag] : synchp.successors(sr.id)) {
        if (!sync_read(exec.op(sr2))) continue;
        for (const auto& [o2, tag2] : d.successors(sr2))
          t.add(o1.id, o2, "T:4");
      }
    }
  }
  return t;
}

namespace detail {

/// Shared ∃SO ∀i skeleton for synchronized and generalized checks. The
/// per-process relation is iLocal ∪ synch ∪ D ∪ T; `extra_seq` (original
/// variant) additionally requires one total order of sync ops shared by all
/// views.
inline Verdict exists_so_for_all(
    const Execution& exec, const Labeling& lab, SyncModelKind kind,
    bool rebuild_d, SerialMode mode, bool original_variant,
    const std::vector<std::vector<OperationPattern>>& subsets,
    const std::vector<std::string>& labels, const CheckOptions& opts) {
  auto gao_scope = [&](int id) { return lab.has(id, Property::GAO); };

  {  // Cap check first: over-budget traces must stay Unknown.
    auto pairs = serial_order_pairs(exec, gao_scope);
    long long undetermined = 0;
    for (const auto& p : pairs)
      if (!opts.so.prune_forced || !p.forced) ++undetermined;
    if (undetermined > opts.so.pair_cap)
      return Verdict::unknown(
          0, "serial-order enumeration exceeded the undetermined-pair cap");
  }

  long long spent = 0;
  std::optional<Verdict> satisfied, violated;
  bool saw_unknown = false;

  auto enumeration = for_each_serial_order(
      exec, gao_scope, opts.so, [&](const Relation& so) {
        Relation synch = synch_order(exec, lab, so);
        Relation d = rebuild_d ? build_D(exec, kind, synch) : lab.D;
        Relation t = transitive_order(exec, d, synch);
        Relation base = synch.united(d).united(t);

        if (!original_variant) {
          // Per-process query relations add iLocal lazily.
          std::optional<Verdict> branch_sat;
          std::vector<ViewQuery> qs;
          for (std::size_t i = 0; i < subsets.size(); ++i) {
            ViewQuery q;
            q.subset = subsets[i];
            q.relation = base.united(exec.local_order(labels[i]));
            q.mode = mode;
            q.budget = opts.view_budget;
            q.label = labels[i];
            qs.push_back(std::move(q));
          }
          Verdict v = all_of(exec, qs, opts);
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
        }

        // Original variant: one shared total order of sync ops, taken from a
        // serial view of program order over sync ops, added to every query.
        OperationPattern sync_pat;
        sync_pat.kind = OperationPattern::KindSel::AnySync;
        std::set<int> sync_ids = select(exec, {sync_pat});
        long long used = 0;
        bool within = for_each_serial_view(
            exec, sync_ids, exec.po, opts.view_budget, &used,
            [&](const std::vector<int>& seq) {
              Relation with_seq = base;
              for (std::size_t a = 0; a < seq.size(); ++a)
                for (std::size_t b = a + 1; b < seq.size(); ++b)
                  with_seq.add(seq[a], seq[b], "seq");
              std::vector<ViewQuery> qs;
              for (std::size_t i = 0; i < subsets.size(); ++i) {
                ViewQuery q;
                q.subset = subsets[i];
                q.relation = with_seq.united(exec.local_order(labels[i]));
                q.mode = mode;
                q.budget = opts.view_budget;
                q.label = labels[i];
                qs.push_back(std::move(q));
              }
              Verdict v = all_of(exec, qs, opts);
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
        spent += used;
        if (!within) saw_unknown = true;
        return !satisfied.has_value();
      });

  if (enumeration.capped)
    return Verdict::unknown(
        spent, "serial-order enumeration exceeded the undetermined-pair cap");
  if (satisfied) {
    satisfied->budget_spent = spent;
    return *satisfied;
  }
  if (saw_unknown)
    return Verdict::unknown(
        spent, "view search budget exhausted; no branch satisfied");
  if (violated) {
    violated->counterexample->note =
        "no serial order admits the views; first branch: " +
        violated->counterexample->note;
    violated->budget_spent = spent;
    return *violated;
  }
  // No sync ops and no processes: vacuously satisfied.
  return Verdict::satisfied({}, spent);
}

}  // namespace detail

/// Synchronized model consistency: sync ops are sequentially consistent
/// among themselves, ordinary ops slow consistent, and D plus the
/// transitive order tie the two levels together. The revised variant only
/// requires the sync ops to respect the synchronization order; the original
/// one additionally fixes a single total order of sync ops shared by every
/// process's view. Location consistency checks partial instead of total
/// views.
inline Verdict check_synchronized(const Execution& exec, SyncModelKind kind,
                                  Variant variant = Variant::Revised,
                                  const CheckOptions& opts = {}) {
  detail::require_kinds(exec, kind);
  Labeling lab = default_labeling(exec, variant);
  bool lazy = kind == SyncModelKind::LazyRelease;
  if (!lazy) lab.D = build_D(exec, kind);

  std::vector<std::vector<OperationPattern>> subsets;
  std::vector<std::string> labels;
  for (const auto& proc : exec.processes) {
    OperationPattern ord_reads;
    ord_reads.kind = OperationPattern::KindSel::OrdinaryRead;
    ord_reads.proc = proc;
    OperationPattern ord_writes;
    ord_writes.kind = OperationPattern::KindSel::OrdinaryWrite;
    OperationPattern sync_reads;
    sync_reads.kind = OperationPattern::KindSel::SyncRead;
    sync_reads.proc = proc;
    OperationPattern sync_writes;
    sync_writes.kind = OperationPattern::KindSel::SyncWrite;
    subsets.push_back({ord_reads, ord_writes, sync_reads, sync_writes});
    labels.push_back(proc);
  }
  SerialMode mode = kind == SyncModelKind::Location ? SerialMode::Partial
                                                    : SerialMode::Total;
  return detail::exists_so_for_all(exec, lab, kind, lazy, mode,
                                   variant == Variant::Original, subsets,
                                   labels, opts);
}

/// Generalized memory consistency over an arbitrary labeling: per-process
/// views of the process's reads plus all writes respecting iLocal ∪ synch ∪
/// D ∪ T, for some serial order over the GAO-labeled ops.
inline Verdict check_generalized(const Execution& exec, const Labeling& lab,
                                 SerialMode mode = SerialMode::Total,
                                 const CheckOptions& opts = {}) {
  std::vector<std::vector<OperationPattern>> subsets;
  std::vector<std::string> labels;
  for (const auto& proc : exec.processes) {
    OperationPattern reads;
    reads.kind = OperationPattern::KindSel::AnyRead;
    reads.proc = proc;
    OperationPattern writes;
    writes.kind = OperationPattern::KindSel::AnyWrite;
    subsets.push_back({reads, writes});
    labels.push_back(proc);
  }
  return detail::exists_so_for_all(exec, lab, SyncModelKind::Weak,
                                   /*rebuild_d=*/false, mode,
                                   lab.variant == Variant::Original, subsets,
                                   labels, opts);
}

enum class DrfKind { Vacuous, Witnessed, Violation, Unknown };

inline const char* to_string(DrfKind k) {
  switch (k) {
    case DrfKind::Vacuous: return "vacuous";
    case DrfKind::Witnessed: return "witnessed";
    case DrfKind::Violation: return "violation";
    case DrfKind::Unknown: return "unknown";
  }
  return "?";
}

struct DrfReport {
  DrfKind kind = DrfKind::Unknown;
  Verdict weak;        // weak consistency, revised variant
  Verdict sequential;  // with sync ops treated as ordinary
};

/// Data-race-freedom on one execution: a weak-consistent execution must
/// also be sequentially consistent. Vacuous when the execution is not even
/// weak consistent.
inline DrfReport drf_check(const Execution& exec,
                           const CheckOptions& opts = {}) {
  detail::require_kinds(exec, SyncModelKind::Weak);
  DrfReport report;
  report.weak = check_synchronized(exec, SyncModelKind::Weak, Variant::Revised,
                                   opts);
  if (report.weak.status == Status::Violated) {
    report.kind = DrfKind::Vacuous;
    return report;
  }

  Execution plain = exec;
  for (auto& op : plain.ops) {
    if (op.kind == Kind::SyncWrite) op.kind = Kind::Write;
    if (op.kind == Kind::SyncRead) op.kind = Kind::Read;
  }
  report.sequential = check_node(
      plain, ModelNode{{Property::GPO, Property::GWO, Property::GAO}}, opts);

  if (report.weak.status == Status::Unknown ||
      report.sequential.status == Status::Unknown) {
    report.kind = DrfKind::Unknown;
    return report;
  }
  report.kind = report.sequential.status == Status::Satisfied
                    ? DrfKind::Witnessed
                    : DrfKind::Violation;
  return report;
}

}  // namespace conlat
