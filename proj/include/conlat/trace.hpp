#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conlat/relation.hpp"

namespace conlat {

/// Ordering properties a model can require of per-process views.
enum class Property { GPO, GDO, GWO, GAO, GPDO };

inline const char* to_string(Property p) {
  switch (p) {
    case Property::GPO: return "GPO";
    case Property::GDO: return "GDO";
    case Property::GWO: return "GWO";
    case Property::GAO: return "GAO";
    case Property::GPDO: return "GPDO";
  }
  return "?";
}

enum class Kind { Read, Write, SyncRead, SyncWrite, Acquire, Release };

inline bool is_read_kind(Kind k) {
  return k == Kind::Read || k == Kind::SyncRead || k == Kind::Acquire;
}
inline bool is_write_kind(Kind k) {
  return k == Kind::Write || k == Kind::SyncWrite || k == Kind::Release;
}
inline bool is_sync_kind(Kind k) {
  return k != Kind::Read && k != Kind::Write;
}

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::Read: return "r";
    case Kind::Write: return "w";
    case Kind::SyncRead: return "sr";
    case Kind::SyncWrite: return "sw";
    case Kind::Acquire: return "acq";
    case Kind::Release: return "rel";
  }
  return "?";
}

/// Values are integers; an absent value is the bottom value written by the
/// initial write of each variable.
using Value = std::optional<long long>;

inline std::string to_string(const Value& v) {
  return v ? std::to_string(*v) : std::string("_");
}

/// Reserved process name of the initial writer.
inline const std::string kInitProc = "\xCE\xB5";  // UTF-8 epsilon

struct Operation {
  int id = 0;
  Kind kind = Kind::Read;
  std::string proc;
  std::string var;
  Value value;
  std::optional<std::string> sync_var;   // @v association for entry models
  std::set<Property> labels;             // !PROP(+PROP)* annotation
  int line = 0;                          // 1-based source line; 0 = initial

  bool is_initial() const { return proc == kInitProc; }
};

struct TraceError : std::runtime_error {
  int line;
  int column;
  TraceError(int line_, int column_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(column_) + ": " + what_),
        line(line_),
        column(column_) {}
};

/// An execution: all operations (initial writes first), per-process program
/// orders, and the writes-to map from each read to its unique writer.
struct Execution {
  std::vector<Operation> ops;               // ops[id].id == id
  std::vector<std::string> processes;       // in order of first appearance
  std::vector<std::string> variables;       // sorted; ids 0..V-1 are initial
  std::vector<int> initial_writes;          // ids, aligned with `variables`
  std::map<std::string, std::vector<int>> program;  // proc -> own op ids
  std::map<int, int> writes_to;             // read id -> write id
  Relation po;                              // full (transitively closed)

  const Operation& op(int id) const { return ops.at(static_cast<size_t>(id)); }

  /// Local order of process `proc`: initial writes first (mutually
  /// unordered), then the process's own ops. Full relation.
  Relation local_order(const std::string& proc) const {
    Relation rel;
    auto it = program.find(proc);
    const std::vector<int>* own = it == program.end() ? nullptr : &it->second;
    if (own) {
      for (int w : initial_writes)
        for (int o : *own) rel.add(w, o, "iLocal");
      for (std::size_t a = 0; a < own->size(); ++a)
        for (std::size_t b = a + 1; b < own->size(); ++b)
          rel.add((*own)[a], (*own)[b], "iLocal");
    }
    return rel;
  }

  int writer_of(int read_id) const { return writes_to.at(read_id); }
};

namespace detail {

inline std::optional<Kind> parse_kind(std::string_view s) {
  if (s == "r") return Kind::Read;
  if (s == "w") return Kind::Write;
  if (s == "sr") return Kind::SyncRead;
  if (s == "sw") return Kind::SyncWrite;
  if (s == "acq") return Kind::Acquire;
  if (s == "rel") return Kind::Release;
  return std::nullopt;
}

inline std::optional<Property> parse_property(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "GPO") return Property::GPO;
  if (s == "GDO") return Property::GDO;
  if (s == "GWO") return Property::GWO;
  if (s == "GAO") return Property::GAO;
  if (s == "GPDO") return Property::GPDO;
  return std::nullopt;
}

struct Token {
  std::string text;
  int column;  // 1-based
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

}  // namespace detail

/// Parses trace text. Lines: `<proc> <kind> <var> <value> [@<sync_var>]
/// [!<prop>(+<prop>)*]`. `#` starts a comment; blank lines are skipped.
/// Builds the execution: synthesizes initial writes, derives writes-to,
/// checks write uniqueness per variable. Throws TraceError.
inline Execution parse_trace(const std::string& text) {
  struct Line {
    Kind kind;
    std::string proc, var;
    Value value;
    std::optional<std::string> sync_var;
    std::set<Property> labels;
    int line;
  };
  std::vector<Line> lines;
  std::set<std::string> vars;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;
    if (toks.size() < 4)
      throw TraceError(lineno, toks.back().column,
                       "expected <proc> <kind> <var> <value>");
    Line ln;
    ln.line = lineno;
    ln.proc = toks[0].text;
    if (ln.proc == kInitProc)
      throw TraceError(lineno, toks[0].column,
                       "process name is reserved for initial writes");
    auto kind = detail::parse_kind(toks[1].text);
    if (!kind)
      throw TraceError(lineno, toks[1].column,
                       "unknown operation kind '" + toks[1].text + "'");
    ln.kind = *kind;
    ln.var = toks[2].text;
    if (toks[3].text == "_") {
      ln.value = std::nullopt;
    } else {
      try {
        std::size_t pos = 0;
        ln.value = std::stoll(toks[3].text, &pos);
        if (pos != toks[3].text.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw TraceError(lineno, toks[3].column,
                         "value must be an integer or '_'");
      }
    }
    for (std::size_t t = 4; t < toks.size(); ++t) {
      const auto& tok = toks[t];
      if (tok.text.size() > 1 && tok.text[0] == '@') {
        if (ln.sync_var)
          throw TraceError(lineno, tok.column, "duplicate @sync_var");
        ln.sync_var = tok.text.substr(1);
      } else if (tok.text.size() > 1 && tok.text[0] == '!') {
        std::string rest = tok.text.substr(1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
          std::size_t plus = rest.find('+', pos);
          std::string name = rest.substr(pos, plus == std::string::npos
                                                  ? std::string::npos
                                                  : plus - pos);
          auto prop = detail::parse_property(name);
          if (!prop)
            throw TraceError(lineno, tok.column,
                             "unknown property '" + name + "'");
          ln.labels.insert(*prop);
          if (plus == std::string::npos) break;
          pos = plus + 1;
        }
      } else {
        throw TraceError(lineno, tok.column,
                         "unexpected token '" + tok.text + "'");
      }
    }
    if (is_write_kind(ln.kind) && !ln.value)
      throw TraceError(lineno, toks[3].column,
                       "writes must carry an integer value");
    vars.insert(ln.var);
    lines.push_back(std::move(ln));
  }

  Execution exec;
  exec.variables.assign(vars.begin(), vars.end());  // set: already sorted
  for (const auto& v : exec.variables) {
    Operation init;
    init.id = static_cast<int>(exec.ops.size());
    init.kind = Kind::Write;
    init.proc = kInitProc;
    init.var = v;
    init.value = std::nullopt;
    exec.initial_writes.push_back(init.id);
    exec.ops.push_back(std::move(init));
  }
  for (const auto& ln : lines) {
    Operation op;
    op.id = static_cast<int>(exec.ops.size());
    op.kind = ln.kind;
    op.proc = ln.proc;
    op.var = ln.var;
    op.value = ln.value;
    op.sync_var = ln.sync_var;
    op.labels = ln.labels;
    op.line = ln.line;
    if (exec.program.find(op.proc) == exec.program.end())
      exec.processes.push_back(op.proc);
    exec.program[op.proc].push_back(op.id);
    exec.ops.push_back(std::move(op));
  }

  // Writes to each variable must carry pairwise distinct values so that
  // writes-to is a function.
  std::map<std::pair<std::string, long long>, int> writer;
  for (const auto& op : exec.ops) {
    if (!is_write_kind(op.kind) || !op.value) continue;
    auto key = std::make_pair(op.var, *op.value);
    auto [it, inserted] = writer.emplace(key, op.id);
    if (!inserted)
      throw TraceError(op.line, 1,
                       "duplicate write of value " + to_string(op.value) +
                           " to variable '" + op.var + "' (also line " +
                           std::to_string(exec.op(it->second).line) + ")");
  }
  for (const auto& op : exec.ops) {
    if (!is_read_kind(op.kind)) continue;
    if (!op.value) {
      // Reads of bottom take the initial write of their variable.
      for (std::size_t i = 0; i < exec.variables.size(); ++i)
        if (exec.variables[i] == op.var)
          exec.writes_to[op.id] = exec.initial_writes[i];
      continue;
    }
    auto it = writer.find(std::make_pair(op.var, *op.value));
    if (it == writer.end())
      throw TraceError(op.line, 1,
                       "read of value " + to_string(op.value) +
                           " from variable '" + op.var +
                           "' has no matching write");
    exec.writes_to[op.id] = it->second;
  }

  for (const auto& p : exec.processes)
    exec.po = exec.po.united(exec.local_order(p));
  return exec;
}

/// Renders an operation in trace-line syntax.
inline std::string render_op(const Operation& op) {
  std::string out = op.proc + " " + to_string(op.kind) + " " + op.var + " " +
                    to_string(op.value);
  if (op.sync_var) out += " @" + *op.sync_var;
  if (!op.labels.empty()) {
    out += " !";
    bool first = true;
    for (Property p : op.labels) {
      if (!first) out += "+";
      out += to_string(p);
      first = false;
    }
  }
  return out;
}

/// Renders the process-issued operations back to trace text, in line order.
inline std::string render_trace(const Execution& exec) {
  std::string out;
  for (const auto& op : exec.ops) {
    if (op.is_initial()) continue;
    out += render_op(op);
    out += "\n";
  }
  return out;
}

/// Match template for selecting operations: each field is either a concrete
/// requirement or a wildcard (unset).
struct OperationPattern {
  enum class KindSel {
    Any,
    AnyRead,        // r, sr, acq
    AnyWrite,       // w, sw, rel
    AnySync,        // sr, sw, acq, rel
    OrdinaryRead,   // r
    OrdinaryWrite,  // w
    SyncRead,       // sr, acq
    SyncWrite,      // sw, rel
  };
  KindSel kind = KindSel::Any;
  std::optional<std::string> proc;
  std::optional<std::string> var;
  std::optional<Value> value;

  bool matches(const Operation& op) const {
    switch (kind) {
      case KindSel::Any: break;
      case KindSel::AnyRead:
        if (!is_read_kind(op.kind)) return false;
        break;
      case KindSel::AnyWrite:
        if (!is_write_kind(op.kind)) return false;
        break;
      case KindSel::AnySync:
        if (!is_sync_kind(op.kind)) return false;
        break;
      case KindSel::OrdinaryRead:
        if (op.kind != Kind::Read) return false;
        break;
      case KindSel::OrdinaryWrite:
        if (op.kind != Kind::Write) return false;
        break;
      case KindSel::SyncRead:
        if (!(is_sync_kind(op.kind) && is_read_kind(op.kind))) return false;
        break;
      case KindSel::SyncWrite:
        if (!(is_sync_kind(op.kind) && is_write_kind(op.kind))) return false;
        break;
    }
    if (proc && op.proc != *proc) return false;
    if (var && op.var != *var) return false;
    if (value && op.value != *value) return false;
    return true;
  }
};

/// Ids of all operations matched by any pattern.
inline std::set<int> select(const Execution& exec,
                            const std::vector<OperationPattern>& patterns) {
  std::set<int> out;
  for (const auto& op : exec.ops)
    for (const auto& pat : patterns)
      if (pat.matches(op)) {
        out.insert(op.id);
        break;
      }
  return out;
}

}  // namespace conlat
