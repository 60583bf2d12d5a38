#pragma once

#include <string>

#include "json.hpp"

#include "conlat/lattice.hpp"
#include "conlat/trace.hpp"
#include "conlat/verdict.hpp"

namespace conlat {

using nlohmann::json;

inline void to_json(json& j, const Edge& e) {
  j = json{{"from", e.from}, {"to", e.to}, {"tag", e.tag}};
}
inline void from_json(const json& j, Edge& e) {
  j.at("from").get_to(e.from);
  j.at("to").get_to(e.to);
  j.at("tag").get_to(e.tag);
}

inline void to_json(json& j, const View& v) {
  j = json{{"label", v.label}, {"order", v.order}};
}
inline void from_json(const json& j, View& v) {
  j.at("label").get_to(v.label);
  j.at("order").get_to(v.order);
}

inline void to_json(json& j, const CounterExample& ce) {
  j = json{{"cycle", ce.cycle}, {"exhausted", ce.exhausted}, {"note", ce.note}};
}
inline void from_json(const json& j, CounterExample& ce) {
  j.at("cycle").get_to(ce.cycle);
  j.at("exhausted").get_to(ce.exhausted);
  j.at("note").get_to(ce.note);
}

inline void to_json(json& j, const Verdict& v) {
  j = json{{"status", to_string(v.status)},
           {"witness", v.witness},
           {"note", v.note},
           {"budget_spent", v.budget_spent}};
  if (v.counterexample)
    j["counterexample"] = *v.counterexample;
  else
    j["counterexample"] = nullptr;
}
inline void from_json(const json& j, Verdict& v) {
  std::string status = j.at("status").get<std::string>();
  v.status = status == "satisfied"  ? Status::Satisfied
             : status == "violated" ? Status::Violated
                                    : Status::Unknown;
  j.at("witness").get_to(v.witness);
  j.at("note").get_to(v.note);
  j.at("budget_spent").get_to(v.budget_spent);
  if (j.at("counterexample").is_null())
    v.counterexample.reset();
  else
    v.counterexample = j.at("counterexample").get<CounterExample>();
}

/// Human-oriented extras: witness views and cycles rendered in trace-line
/// syntax. Ignored when re-parsing, so round-trips stay exact.
inline json verdict_report(const Execution& exec, const Verdict& v) {
  json j = v;
  json rendered = json::array();
  for (const auto& view : v.witness) {
    json lines = json::array();
    for (int id : view.order) lines.push_back(render_op(exec.op(id)));
    rendered.push_back(json{{"label", view.label}, {"ops", lines}});
  }
  j["witness_text"] = rendered;
  if (v.counterexample) {
    json cyc = json::array();
    for (const auto& e : v.counterexample->cycle)
      cyc.push_back(json{{"from", render_op(exec.op(e.from))},
                         {"to", render_op(exec.op(e.to))},
                         {"tag", e.tag}});
    j["counterexample_text"] = cyc;
  }
  return j;
}

}  // namespace conlat
