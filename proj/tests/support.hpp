#pragma once

// Shared helpers for the test suites: corpus loading, a small random trace
// generator, and independent re-implementations used as oracles.

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conlat/lattice.hpp"
#include "conlat/trace.hpp"

namespace testsup {

inline std::string corpus_path(const std::string& name) {
  return std::string(CONLAT_CORPUS_DIR) + "/" + name + ".trace";
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline conlat::Execution load_corpus(const std::string& name) {
  return conlat::parse_trace(slurp(corpus_path(name)));
}

/// Random well-formed trace: every write gets a fresh value per variable,
/// every read picks bottom or any written value of its variable (including
/// writes appearing later in the file; only per-process order matters).
inline std::string random_trace(unsigned long long seed, int max_ops,
                                int procs = 3, int vars = 2) {
  std::mt19937_64 rng(seed);
  int nops = 1 + static_cast<int>(rng() % max_ops);
  int nproc = 1 + static_cast<int>(rng() % procs);
  int nvar = 1 + static_cast<int>(rng() % vars);

  // Pre-plan the write set so reads can target later writes too.
  struct Slot {
    int proc, var;
    bool write;
  };
  std::vector<Slot> slots(nops);
  std::vector<std::vector<long long>> written(nvar);
  std::map<int, long long> next_val;
  for (auto& s : slots) {
    s.proc = static_cast<int>(rng() % nproc);
    s.var = static_cast<int>(rng() % nvar);
    s.write = rng() % 2 == 0;
    if (s.write) written[s.var].push_back(++next_val[s.var] + 100 * s.var);
  }
  std::ostringstream out;
  std::vector<std::size_t> cursor(nvar, 0);
  for (const auto& s : slots) {
    out << "p" << s.proc + 1 << (s.write ? " w v" : " r v") << s.var << " ";
    if (s.write) {
      out << written[s.var][cursor[s.var]++];
    } else if (written[s.var].empty() || rng() % 4 == 0) {
      out << "_";
    } else {
      out << written[s.var][rng() % written[s.var].size()];
    }
    out << "\n";
  }
  return out.str();
}

/// Independent transitive-closure oracle: boolean matrix squaring.
inline conlat::Relation closure_oracle(const conlat::Relation& rel) {
  std::vector<int> ids;
  for (int n : rel.nodes()) ids.push_back(n);
  int n = static_cast<int>(ids.size());
  std::map<int, int> index;
  for (int i = 0; i < n; ++i) index[ids[i]] = i;
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (const auto& e : rel.edges()) m[index[e.from]][index[e.to]] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (m[a][b])
          for (int c = 0; c < n; ++c)
            if (m[b][c] && !m[a][c]) m[a][c] = changed = true;
  }
  conlat::Relation out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (m[a][b]) out.add(ids[a], ids[b], "oracle");
  return out;
}

/// Counts linear extensions of `rel` over `ids` by trying all permutations.
inline long long count_linear_extensions_oracle(const conlat::Relation& rel,
                                                std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  long long count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ids.size() && ok; ++i)
      for (std::size_t j = 0; j < i && ok; ++j)
        if (rel.contains(ids[i], ids[j])) ok = false;
    if (ok) ++count;
  } while (std::next_permutation(ids.begin(), ids.end()));
  return count;
}

/// Disjoint union of trace texts: processes, variables and sync tags of the
/// k-th part get a "u<k>" prefix so the parts cannot interact.
inline std::string disjoint_union(const std::vector<std::string>& parts) {
  std::ostringstream out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    std::istringstream in(parts[k]);
    std::string line;
    std::string prefix = "u" + std::to_string(k);
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      std::string body = hash == std::string::npos ? line : line.substr(0, hash);
      std::istringstream ls(body);
      std::vector<std::string> tok;
      std::string t;
      while (ls >> t) tok.push_back(t);
      if (tok.size() < 4) continue;
      tok[0] = prefix + tok[0];
      tok[2] = prefix + tok[2];
      for (std::size_t i = 4; i < tok.size(); ++i)
        if (tok[i][0] == '@') tok[i] = "@" + prefix + tok[i].substr(1);
      for (std::size_t i = 0; i < tok.size(); ++i)
        out << (i ? " " : "") << tok[i];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace testsup
