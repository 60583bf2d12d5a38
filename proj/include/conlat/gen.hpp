#pragma once

#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "conlat/trace.hpp"

namespace conlat {

/// Deterministic workload description; equal specs generate equal traces.
struct GenSpec {
  std::string model = "sequential";
  int processes = 2;
  int ops_per_process = 6;
  int variables = 2;
  unsigned long long seed = 0;
  double sync_prob = 0.2;  // only used by the weak target
};

namespace gendetail {

struct Emitter {
  std::vector<std::string> lines;
  std::map<std::string, long long> next_value;  // fresh per variable

  long long fresh(const std::string& var) { return ++next_value[var]; }

  void emit(const std::string& proc, const char* kind, const std::string& var,
            const Value& value) {
    lines.push_back(proc + " " + std::string(kind) + " " + var + " " +
                    to_string(value));
  }

  std::string text() const {
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += "\n";
    }
    return out;
  }
};

// Uniform pick without distribution objects: reproducible everywhere.
inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

struct Schedule {
  std::vector<std::string> procs;
  std::vector<std::string> vars;
  std::vector<int> remaining;

  Schedule(const GenSpec& spec) {
    for (int p = 1; p <= spec.processes; ++p)
      procs.push_back("p" + std::to_string(p));
    for (int v = 0; v < spec.variables; ++v)
      vars.push_back("v" + std::to_string(v));
    remaining.assign(procs.size(), spec.ops_per_process);
  }

  // Picks a process that still has operations left; npos when done.
  std::size_t next(std::mt19937_64& rng) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (remaining[i] > 0) live.push_back(i);
    if (live.empty()) return static_cast<std::size_t>(-1);
    std::size_t i = live[pick(rng, live.size())];
    --remaining[i];
    return i;
  }
};

}  // namespace gendetail

/// Simulates a memory implementation of the target model and records the
/// issued operations. Reads return whatever the simulated store holds, so
/// the trace satisfies the target model by construction.
inline std::string gen_trace(const GenSpec& spec) {
  using gendetail::pick;
  std::mt19937_64 rng(spec.seed);
  gendetail::Emitter out;
  gendetail::Schedule sched(spec);
  const auto& procs = sched.procs;
  const auto& vars = sched.vars;
  std::size_t P = procs.size();

  auto run_sequential = [&](bool weak_marks) {
    std::map<std::string, Value> store;
    for (std::size_t i; (i = sched.next(rng)) != static_cast<std::size_t>(-1);) {
      const std::string& var = vars[pick(rng, vars.size())];
      bool write = pick(rng, 2) == 0;
      bool sync = weak_marks &&
                  (rng() % 1000) < static_cast<unsigned long long>(
                                       spec.sync_prob * 1000);
      if (write) {
        long long v = out.fresh(var);
        store[var] = v;
        out.emit(procs[i], sync ? "sw" : "w", var, v);
      } else {
        out.emit(procs[i], sync ? "sr" : "r", var, store[var]);
      }
    }
  };

  if (spec.model == "sequential") {
    run_sequential(false);
  } else if (spec.model == "weak") {
    run_sequential(true);
  } else if (spec.model == "pram") {
    // Per-process replicas; writes propagate through per-sender FIFO queues.
    std::vector<std::map<std::string, Value>> copy(P);
    std::vector<std::vector<std::deque<std::pair<std::string, long long>>>>
        chan(P, std::vector<std::deque<std::pair<std::string, long long>>>(P));
    auto deliver_some = [&](std::size_t to) {
      for (std::size_t from = 0; from < P; ++from) {
        while (!chan[from][to].empty() && pick(rng, 2) == 0) {
          auto [var, v] = chan[from][to].front();
          chan[from][to].pop_front();
          copy[to][var] = v;
        }
      }
    };
    for (std::size_t i; (i = sched.next(rng)) != static_cast<std::size_t>(-1);) {
      deliver_some(i);
      const std::string& var = vars[pick(rng, vars.size())];
      if (pick(rng, 2) == 0) {
        long long v = out.fresh(var);
        copy[i][var] = v;
        for (std::size_t to = 0; to < P; ++to)
          if (to != i) chan[i][to].emplace_back(var, v);
        out.emit(procs[i], "w", var, v);
      } else {
        out.emit(procs[i], "r", var, copy[i][var]);
      }
    }
  } else if (spec.model == "cache") {
    // One global write list per variable; every (process, variable) cursor
    // only moves forward through it.
    std::map<std::string, std::vector<long long>> list;
    std::map<std::pair<std::size_t, std::string>, std::size_t> cursor;
    for (std::size_t i; (i = sched.next(rng)) != static_cast<std::size_t>(-1);) {
      const std::string& var = vars[pick(rng, vars.size())];
      auto key = std::make_pair(i, var);
      if (pick(rng, 2) == 0) {
        long long v = out.fresh(var);
        list[var].push_back(v);
        cursor[key] = list[var].size();
        out.emit(procs[i], "w", var, v);
      } else {
        std::size_t at = cursor[key];
        std::size_t room = list[var].size() - at;
        if (room > 0) at += pick(rng, room + 1);
        cursor[key] = at;
        out.emit(procs[i], "r", var,
                 at == 0 ? Value{} : Value{list[var][at - 1]});
      }
    }
  } else if (spec.model == "causal") {
    // Vector-clock replicated store with causal delivery.
    struct Msg {
      std::string var;
      long long value;
      std::vector<unsigned> vc;
      std::size_t sender;
    };
    std::vector<std::map<std::string, Value>> copy(P);
    std::vector<std::vector<unsigned>> clock(P, std::vector<unsigned>(P, 0));
    std::vector<std::vector<Msg>> inbox(P);
    auto deliverable = [&](std::size_t to, const Msg& m) {
      if (m.vc[m.sender] != clock[to][m.sender] + 1) return false;
      for (std::size_t k = 0; k < P; ++k)
        if (k != m.sender && m.vc[k] > clock[to][k]) return false;
      return true;
    };
    auto deliver_some = [&](std::size_t to) {
      bool progressed = true;
      while (progressed) {
        progressed = false;
        for (std::size_t m = 0; m < inbox[to].size(); ++m) {
          if (!deliverable(to, inbox[to][m]) || pick(rng, 2) != 0) continue;
          copy[to][inbox[to][m].var] = inbox[to][m].value;
          clock[to][inbox[to][m].sender] = inbox[to][m].vc[inbox[to][m].sender];
          inbox[to].erase(inbox[to].begin() + static_cast<long>(m));
          progressed = true;
          break;
        }
      }
    };
    for (std::size_t i; (i = sched.next(rng)) != static_cast<std::size_t>(-1);) {
      deliver_some(i);
      const std::string& var = vars[pick(rng, vars.size())];
      if (pick(rng, 2) == 0) {
        long long v = out.fresh(var);
        ++clock[i][i];
        copy[i][var] = v;
        Msg m{var, v, clock[i], i};
        for (std::size_t to = 0; to < P; ++to)
          if (to != i) inbox[to].push_back(m);
        out.emit(procs[i], "w", var, v);
      } else {
        out.emit(procs[i], "r", var, copy[i][var]);
      }
    }
  } else if (spec.model == "slow") {
    // Independent FIFO channel per (sender, variable); own writes apply
    // immediately.
    std::vector<std::map<std::string, Value>> copy(P);
    std::map<std::tuple<std::size_t, std::size_t, std::string>,
             std::deque<long long>>
        chan;  // (from, to, var)
    auto deliver_some = [&](std::size_t to) {
      for (std::size_t from = 0; from < P; ++from)
        for (const auto& var : vars) {
          auto key = std::make_tuple(from, to, var);
          auto it = chan.find(key);
          if (it == chan.end()) continue;
          while (!it->second.empty() && pick(rng, 2) == 0) {
            copy[to][var] = it->second.front();
            it->second.pop_front();
          }
        }
    };
    for (std::size_t i; (i = sched.next(rng)) != static_cast<std::size_t>(-1);) {
      deliver_some(i);
      const std::string& var = vars[pick(rng, vars.size())];
      if (pick(rng, 2) == 0) {
        long long v = out.fresh(var);
        copy[i][var] = v;
        for (std::size_t to = 0; to < P; ++to)
          if (to != i) chan[std::make_tuple(i, to, var)].push_back(v);
        out.emit(procs[i], "w", var, v);
      } else {
        out.emit(procs[i], "r", var, copy[i][var]);
      }
    }
  } else {
    throw std::invalid_argument("gen_trace: unknown model '" + spec.model +
                                "'");
  }
  return out.text();
}

/// Reassigns `n` randomly chosen reads to other written values of their
/// variable (the initial value is a target too). The result always
/// re-parses; throws when n > 0 and no read has an alternative value.
inline std::string mutate_trace(const std::string& trace,
                                unsigned long long seed, int n) {
  Execution exec = parse_trace(trace);
  std::mt19937_64 rng(seed);

  // Alternatives per variable: all written values plus the initial bottom.
  std::map<std::string, std::vector<Value>> values;
  for (const auto& var : exec.variables) values[var].push_back(Value{});
  for (const auto& op : exec.ops)
    if (is_write_kind(op.kind) && op.value)
      values[op.var].push_back(op.value);

  std::vector<int> mutable_reads;
  for (const auto& op : exec.ops)
    if (!op.is_initial() && is_read_kind(op.kind) &&
        values[op.var].size() > 1)
      mutable_reads.push_back(op.id);
  if (n > 0 && mutable_reads.empty())
    throw std::invalid_argument(
        "mutate_trace: no read has an alternative value");

  for (int k = 0; k < n; ++k) {
    int id = mutable_reads[gendetail::pick(rng, mutable_reads.size())];
    Operation& read = exec.ops[static_cast<std::size_t>(id)];
    std::vector<Value> alts;
    for (const auto& v : values[read.var])
      if (v != read.value) alts.push_back(v);
    read.value = alts[gendetail::pick(rng, alts.size())];
  }
  return render_trace(exec);
}

}  // namespace conlat
