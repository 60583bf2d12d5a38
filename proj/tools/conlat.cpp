// Command-line front end: consistency checking, lattice classification,
// lattice algebra, DRF analysis, and workload generation.
//
// Exit codes: 0 satisfied/success, 1 violated, 2 unknown (budget),
// 64 usage error, 65 invalid trace.

#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "conlat/gen.hpp"
#include "conlat/json_io.hpp"
#include "conlat/lattice.hpp"
#include "conlat/transitions.hpp"

namespace {

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadTrace = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw conlat::TraceError(0, 0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

conlat::Execution load_trace(const std::string& path) {
  return conlat::parse_trace(read_input(path));
}

int status_exit(conlat::Status s) {
  switch (s) {
    case conlat::Status::Satisfied: return kExitSatisfied;
    case conlat::Status::Violated: return kExitViolated;
    case conlat::Status::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<conlat::SyncModelKind> parse_sync_model(const std::string& raw) {
  std::string name = lower(raw);
  if (name == "weak") return conlat::SyncModelKind::Weak;
  if (name == "release") return conlat::SyncModelKind::Release;
  if (name == "lazy-release" || name == "lazy_release")
    return conlat::SyncModelKind::LazyRelease;
  if (name == "entry") return conlat::SyncModelKind::Entry;
  if (name == "scope") return conlat::SyncModelKind::Scope;
  if (name == "location") return conlat::SyncModelKind::Location;
  return std::nullopt;
}

void print_witness(const conlat::Execution& exec, const conlat::Verdict& v,
                   std::ostream& out) {
  for (const auto& view : v.witness) {
    out << "view " << view.label << ":\n";
    for (int id : view.order) out << "  " << conlat::render_op(exec.op(id)) << "\n";
  }
  if (v.witness.empty()) out << "(no explicit views; vacuously serial)\n";
}

void print_counterexample(const conlat::Execution& exec,
                          const conlat::Verdict& v, std::ostream& out) {
  if (!v.counterexample) return;
  const auto& ce = *v.counterexample;
  out << "reason: " << ce.note << "\n";
  for (const auto& e : ce.cycle)
    out << "  " << conlat::render_op(exec.op(e.from)) << "  ->  "
        << conlat::render_op(exec.op(e.to))
        << (e.tag.empty() ? "" : "  [" + e.tag + "]") << "\n";
}

void report_verdict(const conlat::Execution& exec, const std::string& model,
                    const conlat::Verdict& v, bool witness, bool explain,
                    bool as_json, std::ostream& out) {
  if (as_json) {
    conlat::json j = conlat::verdict_report(exec, v);
    j["model"] = model;
    out << j.dump(2) << "\n";
    return;
  }
  out << model << ": " << conlat::to_string(v.status);
  if (!v.note.empty()) out << " (" << v.note << ")";
  out << "\n";
  if (witness && v.status == conlat::Status::Satisfied) print_witness(exec, v, out);
  if (explain && v.status == conlat::Status::Violated)
    print_counterexample(exec, v, out);
}

conlat::Verdict dispatch_check(const conlat::Execution& exec,
                               const std::string& raw_model,
                               conlat::Variant variant,
                               const conlat::CheckOptions& opts) {
  std::string name = lower(raw_model);
  if (auto sync = parse_sync_model(name))
    return conlat::check_synchronized(exec, *sync, variant, opts);
  if (name == "generalized") {
    conlat::Labeling lab = conlat::trace_labeling(exec);
    lab.variant = variant;
    return conlat::check_generalized(exec, lab, conlat::SerialMode::Total, opts);
  }
  auto ref = conlat::parse_model_name(name);
  if (!ref) throw UsageError("unknown model '" + raw_model + "'");
  switch (ref->kind) {
    case conlat::ModelRef::Kind::Processor:
      return conlat::check_processor(exec, opts);
    case conlat::ModelRef::Kind::Intersection:
      return conlat::check_intersection(exec, opts);
    case conlat::ModelRef::Kind::Node:
      return conlat::check_node(exec, ref->node, opts);
  }
  throw UsageError("unknown model '" + raw_model + "'");
}

int cmd_classify(const conlat::Execution& exec, const conlat::CheckOptions& opts,
                 int jobs, bool as_json) {
  const auto& nodes = conlat::lattice_nodes();
  std::vector<conlat::Verdict> verdicts(nodes.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < nodes.size(); ++i)
      verdicts[i] = conlat::check_node(exec, nodes[i], opts);
  } else {
    std::vector<std::thread> pool;
    std::mutex next_mu;
    size_t next = 0;
    int workers = std::min<int>(jobs, static_cast<int>(nodes.size()));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (;;) {
          size_t i;
          {
            std::lock_guard<std::mutex> lk(next_mu);
            if (next >= nodes.size()) return;
            i = next++;
          }
          verdicts[i] = conlat::check_node(exec, nodes[i], opts);
        }
      });
    for (auto& th : pool) th.join();
  }

  conlat::ClassifyResult res;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (verdicts[i].status == conlat::Status::Unknown) res.any_unknown = true;
    res.nodes.emplace_back(nodes[i], verdicts[i]);
  }
  for (const auto& [node, verdict] : res.nodes) {
    if (verdict.status != conlat::Status::Satisfied) continue;
    bool dominated = false;
    for (const auto& [other, ov] : res.nodes) {
      if (ov.status != conlat::Status::Satisfied || other == node) continue;
      if (conlat::compare(other, node) == conlat::Comparison::Stronger) {
        dominated = true;
        break;
      }
    }
    if (!dominated) res.maximal.push_back(node);
  }

  if (as_json) {
    conlat::json j;
    j["nodes"] = conlat::json::array();
    for (const auto& [node, verdict] : res.nodes)
      j["nodes"].push_back({{"node", conlat::canonical_name(node)},
                            {"status", conlat::to_string(verdict.status)}});
    j["maximal"] = conlat::json::array();
    for (const auto& node : res.maximal)
      j["maximal"].push_back(conlat::canonical_name(node));
    j["any_unknown"] = res.any_unknown;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [node, verdict] : res.nodes)
      std::cout << conlat::canonical_name(node) << ": "
                << conlat::to_string(verdict.status) << "\n";
    std::cout << "maximal:";
    for (const auto& node : res.maximal)
      std::cout << " " << conlat::canonical_name(node);
    std::cout << "\n";
  }
  return res.any_unknown ? kExitUnknown : kExitSatisfied;
}

conlat::ModelNode parse_node_or_die(const std::string& raw) {
  auto ref = conlat::parse_model_name(raw);
  if (!ref || ref->kind != conlat::ModelRef::Kind::Node)
    throw UsageError("'" + raw + "' is not a lattice node");
  return ref->node;
}

int cmd_lattice(const std::string& op, const std::string& a,
                const std::string& b, bool as_json) {
  if (op == "show") {
    for (const auto& node : conlat::lattice_nodes())
      std::cout << conlat::canonical_name(node) << "\n";
    return kExitSatisfied;
  }
  conlat::ModelNode na = parse_node_or_die(a), nb = parse_node_or_die(b);
  std::string result;
  if (op == "lub")
    result = conlat::canonical_name(conlat::lub(na, nb));
  else if (op == "glb")
    result = conlat::canonical_name(conlat::glb(na, nb));
  else if (op == "compare")
    result = conlat::to_string(conlat::compare(na, nb));
  else
    throw UsageError("unknown lattice operation '" + op + "'");
  if (as_json)
    std::cout << conlat::json{{"op", op},
                              {"a", conlat::canonical_name(na)},
                              {"b", conlat::canonical_name(nb)},
                              {"result", result}}
                     .dump(2)
              << "\n";
  else
    std::cout << result << "\n";
  return kExitSatisfied;
}

int cmd_drf(const conlat::Execution& exec, const conlat::CheckOptions& opts,
            bool witness, bool explain, bool as_json) {
  conlat::DrfReport report = conlat::drf_check(exec, opts);
  if (as_json) {
    conlat::json j;
    j["result"] = conlat::to_string(report.kind);
    j["weak"] = conlat::verdict_report(exec, report.weak);
    j["sequential"] = conlat::verdict_report(exec, report.sequential);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "drf: " << conlat::to_string(report.kind) << "\n";
    std::cout << "  weak (revised): " << conlat::to_string(report.weak.status)
              << "\n";
    std::cout << "  sequential (sync ops as ordinary): "
              << conlat::to_string(report.sequential.status) << "\n";
    if (witness && report.kind == conlat::DrfKind::Witnessed)
      print_witness(exec, report.sequential, std::cout);
    if (explain && report.kind == conlat::DrfKind::Violation)
      print_counterexample(exec, report.sequential, std::cout);
  }
  switch (report.kind) {
    case conlat::DrfKind::Witnessed:
    case conlat::DrfKind::Vacuous: return kExitSatisfied;
    case conlat::DrfKind::Violation: return kExitViolated;
    case conlat::DrfKind::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistency-model checker for shared-memory traces"};
  app.require_subcommand(1);

  // shared flags
  bool witness = false, explain = false, as_json = false, use_oracle = false;
  long long budget = 1000000;
  std::string variant_name = "revised";
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd, bool with_variant) {
    cmd->add_flag("--witness", witness, "print satisfying views");
    cmd->add_flag("--explain", explain, "print the counterexample cycle");
    cmd->add_flag("--json", as_json, "machine-readable output");
    cmd->add_flag("--oracle", use_oracle, "cross-check views by brute force");
    cmd->add_option("--budget", budget, "view search node budget");
    if (with_variant)
      cmd->add_option("--variant", variant_name,
                      "synchronized-model variant: original|revised")
          ->check(CLI::IsMember({"original", "revised"}));
  };

  std::string model, trace_path = "-";
  auto* check = app.add_subcommand("check", "check one model on a trace");
  check->add_option("model", model, "model name")->required();
  check->add_option("trace", trace_path, "trace file, or - for stdin");
  add_common(check, true);

  auto* explain_cmd =
      app.add_subcommand("explain", "like check, with the counterexample shown");
  explain_cmd->add_option("model", model, "model name")->required();
  explain_cmd->add_option("trace", trace_path, "trace file, or - for stdin");
  add_common(explain_cmd, true);

  auto* classify =
      app.add_subcommand("classify", "strongest satisfied lattice nodes");
  classify->add_option("trace", trace_path, "trace file, or - for stdin");
  classify->add_option("--jobs", jobs, "max concurrent node checks")
      ->check(CLI::PositiveNumber);
  add_common(classify, false);

  std::string lat_op, lat_a, lat_b;
  auto* lattice = app.add_subcommand("lattice", "lattice algebra");
  lattice->add_option("op", lat_op, "lub|glb|compare|show")->required();
  lattice->add_option("a", lat_a, "first node");
  lattice->add_option("b", lat_b, "second node");
  lattice->add_flag("--json", as_json, "machine-readable output");

  auto* drf = app.add_subcommand("drf", "execution-level data-race-freedom");
  drf->add_option("trace", trace_path, "trace file, or - for stdin");
  add_common(drf, false);

  conlat::GenSpec gspec;
  std::string mutate_input;
  int mutate_count = 0;
  unsigned long long mutate_seed = 0;
  auto* gen = app.add_subcommand("gen", "generate or mutate traces");
  gen->add_option("--model", gspec.model,
                  "sequential|pram|cache|causal|slow|weak");
  gen->add_option("--procs", gspec.processes, "process count")
      ->check(CLI::PositiveNumber);
  gen->add_option("--ops", gspec.ops_per_process, "operations per process")
      ->check(CLI::PositiveNumber);
  gen->add_option("--vars", gspec.variables, "variable count")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gspec.seed, "random seed");
  gen->add_option("--sync-prob", gspec.sync_prob,
                  "sync-op probability (weak target)");
  gen->add_option("--mutate", mutate_count,
                  "reassign this many reads in an existing trace");
  gen->add_option("--mutate-seed", mutate_seed, "seed for --mutate");
  gen->add_option("--input", mutate_input, "trace to mutate, or - for stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  conlat::CheckOptions opts;
  opts.view_budget = budget;
  opts.use_oracle = use_oracle;
  conlat::Variant variant = variant_name == "original"
                                ? conlat::Variant::Original
                                : conlat::Variant::Revised;

  try {
    if (check->parsed() || explain_cmd->parsed()) {
      conlat::Execution exec = load_trace(trace_path);
      conlat::Verdict v = dispatch_check(exec, model, variant, opts);
      report_verdict(exec, lower(model), v, witness,
                     explain || explain_cmd->parsed(), as_json, std::cout);
      return status_exit(v.status);
    }
    if (classify->parsed()) {
      conlat::Execution exec = load_trace(trace_path);
      return cmd_classify(exec, opts, jobs, as_json);
    }
    if (lattice->parsed()) {
      if (lat_op != "show" && (lat_a.empty() || lat_b.empty()))
        throw UsageError("lattice " + lat_op + " needs two node names");
      return cmd_lattice(lat_op, lat_a, lat_b, as_json);
    }
    if (drf->parsed()) {
      conlat::Execution exec = load_trace(trace_path);
      return cmd_drf(exec, opts, witness, explain, as_json);
    }
    if (gen->parsed()) {
      if (mutate_count > 0 || !mutate_input.empty()) {
        if (mutate_input.empty())
          throw UsageError("--mutate requires --input");
        std::string text = read_input(mutate_input);
        std::cout << conlat::mutate_trace(text, mutate_seed, mutate_count);
        return kExitSatisfied;
      }
      std::cout << conlat::gen_trace(gspec);
      return kExitSatisfied;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const conlat::TraceError& e) {
    std::cerr << "trace error: " << e.what() << "\n";
    return kExitBadTrace;
  } catch (const conlat::ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitBadTrace;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
