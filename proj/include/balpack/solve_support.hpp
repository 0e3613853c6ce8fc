#pragma once

// Plumbing shared by the three solvers: parallel-copy capping with id
// translation, the oracle stage, and final witness verification.

#include <chrono>
#include <utility>
#include <vector>

#include "balpack/errors.hpp"
#include "balpack/graph.hpp"
#include "balpack/oracle.hpp"
#include "balpack/report.hpp"

namespace balpack::fpt {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Decides a capped instance with the exhaustive oracle. Over budget means
/// UNKNOWN.
inline SolveReport oracle_stage(const ProblemInstance& inst, const OracleBudget& budget) {
  SolveReport report;
  report.problem = inst.kind;
  report.k = inst.k;
  report.stage = "oracle";
  try {
    oracle::OracleResult res;
    switch (inst.kind) {
      case ProblemKind::arb: res = oracle::oracle_arb(inst.digraph(), inst.k, budget); break;
      case ProblemKind::flow: res = oracle::oracle_flow(inst.digraph(), inst.k, budget); break;
      case ProblemKind::tree: res = oracle::oracle_tree(inst.undirected(), inst.k, budget); break;
    }
    report.decision = res.decision;
    report.witness = std::move(res.witness);
  } catch (const BudgetExceeded&) {
    report.decision = Decision::unknown;
  }
  return report;
}

/// Translates witness ids from the capped instance back to the input and
/// verifies the result independently. A rejected witness is a bug.
inline void finalize(SolveReport& report, const ProblemInstance& original, const std::vector<int>& original_id) {
  if (!report.witness) return;
  auto& w = *report.witness;
  auto map_ids = [&](std::vector<int>& ids) {
    for (int& id : ids) id = original_id[static_cast<std::size_t>(id)];
    std::sort(ids.begin(), ids.end());
  };
  auto map_flow = [&](std::optional<BranchingFlow>& z) {
    if (!z) return;
    for (auto& [a, v] : z->values) a = original_id[static_cast<std::size_t>(a)];
    std::sort(z->values.begin(), z->values.end());
  };
  map_ids(w.tree1);
  map_ids(w.tree2);
  map_flow(w.flow1);
  map_flow(w.flow2);
  report.verdict = oracle::validate_witness(original, w);
  if (!report.verdict->valid) throw InvariantViolation("produced witness failed independent validation");
}

}  // namespace balpack::fpt
