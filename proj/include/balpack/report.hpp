#pragma once

// Decision reports shared by the solvers, the oracles and the CLI.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/flow.hpp"
#include "balpack/graph.hpp"

namespace balpack {

enum class Decision { yes, no, unknown };

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::yes: return "YES";
    case Decision::no: return "NO";
    case Decision::unknown: return "UNKNOWN";
  }
  return "?";
}

/// Two disjoint spanning structures, as arc or edge ids of the instance they
/// refer to. Flow branchings also carry their flows.
struct Witness {
  std::vector<int> tree1;
  std::vector<int> tree2;
  std::optional<BranchingFlow> flow1;
  std::optional<BranchingFlow> flow2;
};

struct Counters {
  std::int64_t kernels = 0;
  std::int64_t pairs_tested = 0;
  std::int64_t grow_steps = 0;
};

struct CheckItem {
  std::string check;
  bool passed = true;
  std::string detail;
  std::vector<int> ids;
};

struct Verdict {
  bool valid = true;
  std::vector<CheckItem> checks;

  void add(std::string check, bool passed, std::string detail = {}, std::vector<int> ids = {}) {
    valid = valid && passed;
    checks.push_back({std::move(check), passed, std::move(detail), std::move(ids)});
  }
};

/// Limits for the exhaustive oracles. Arc count only matters for flow
/// branchings, which enumerate bipartitions of the arc set.
struct OracleBudget {
  int max_vertices = 7;
  int max_arcs = 14;
  std::int64_t max_structures = 4'000'000;
};

struct SolveOptions {
  int workers = 1;
  bool deterministic = true;
  /// Budget for instances handed to the oracle (too small for the FPT
  /// pipeline, or a completion fallback).
  OracleBudget oracle{10, 16, 20'000'000};
};

struct SolveReport {
  ProblemKind problem = ProblemKind::arb;
  int k = 1;
  Decision decision = Decision::unknown;
  std::optional<Witness> witness;
  Counters counters;
  std::string stage;
  std::optional<CutWitness> cut;
  std::optional<Verdict> verdict;
  double seconds = 0;
};

inline nlohmann::ordered_json flow_to_json(const BranchingFlow& z) {
  auto out = nlohmann::ordered_json::array();
  for (auto [a, v] : z.values) out.push_back({a, v});
  return out;
}

inline BranchingFlow flow_from_json(const nlohmann::json& j) {
  BranchingFlow z;
  for (const auto& item : j) z.values.emplace_back(item.at(0).get<int>(), item.at(1).get<std::int64_t>());
  std::sort(z.values.begin(), z.values.end());
  return z;
}

inline nlohmann::ordered_json to_json(const Witness& w) {
  nlohmann::ordered_json j;
  j["tree1"] = w.tree1;
  j["tree2"] = w.tree2;
  if (w.flow1) j["flow1"] = flow_to_json(*w.flow1);
  if (w.flow2) j["flow2"] = flow_to_json(*w.flow2);
  return j;
}

/// Accepts a bare witness object or a whole report carrying one.
inline Witness witness_from_json(const nlohmann::json& j) {
  const auto& w = j.contains("witness") ? j.at("witness") : j;
  if (w.is_null()) throw ParseError(0, "report has no witness");
  Witness out;
  out.tree1 = w.at("tree1").get<std::vector<int>>();
  out.tree2 = w.at("tree2").get<std::vector<int>>();
  if (w.contains("flow1")) out.flow1 = flow_from_json(w.at("flow1"));
  if (w.contains("flow2")) out.flow2 = flow_from_json(w.at("flow2"));
  return out;
}

inline nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["valid"] = v.valid;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : v.checks) {
    nlohmann::ordered_json item;
    item["check"] = c.check;
    item["passed"] = c.passed;
    if (!c.detail.empty()) item["detail"] = c.detail;
    if (!c.ids.empty()) item["ids"] = c.ids;
    checks.push_back(std::move(item));
  }
  j["checks"] = std::move(checks);
  return j;
}

/// Timings are left out in deterministic mode so repeated runs compare equal.
inline nlohmann::ordered_json to_json(const SolveReport& r, bool deterministic = true) {
  nlohmann::ordered_json j;
  j["problem"] = std::string(to_string(r.problem));
  j["k"] = r.k;
  j["decision"] = std::string(to_string(r.decision));
  j["witness"] = r.witness ? to_json(*r.witness) : nlohmann::ordered_json(nullptr);
  j["counters"] = {{"kernels", r.counters.kernels},
                   {"pairsTested", r.counters.pairs_tested},
                   {"growSteps", r.counters.grow_steps}};
  j["stage"] = r.stage;
  if (r.cut) j["cut"] = {{"vertices", r.cut->vertices}, {"inDegree", r.cut->in_degree}};
  if (r.verdict) j["verdict"] = to_json(*r.verdict);
  if (!deterministic) j["seconds"] = r.seconds;
  return j;
}

}  // namespace balpack
