#pragma once

// Command-line front end. `run` parses argv, dispatches to the library and
// returns the process exit code: 0 YES or valid, 1 NO or invalid, 2 usage or
// input error, 3 internal failure or undecided (a diagnostics file is written).

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "balpack/arb.hpp"
#include "balpack/errors.hpp"
#include "balpack/flow_pack.hpp"
#include "balpack/graph.hpp"
#include "balpack/instancegen.hpp"
#include "balpack/matroid.hpp"
#include "balpack/oracle.hpp"
#include "balpack/report.hpp"
#include "balpack/tree.hpp"

namespace balpack::cli {

enum ExitCode : int { kYes = 0, kNo = 1, kUsage = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem;
  std::optional<int> k;
  std::string input;
  std::string witness;
  std::string output;
  std::string roles;
  std::string format = "json";
  bool deterministic = true;
  int workers = 1;
  std::optional<std::int64_t> budget;
  std::optional<int> p;
  // gen
  std::optional<int> q;
  int copies = 1;
  int n = 0;
  int arcs = 0;
  std::uint64_t seed = 0;
  std::string ensure = "none";
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Flat `key: value` lines; nested values stay JSON.
inline std::string render_text(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it)
    os << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
  return os.str();
}

inline ProblemKind kind_of(const std::string& name) {
  auto kind = problem_kind_from(name);
  if (!kind) throw UsageError("unknown problem '" + name + "'");
  return *kind;
}

/// Reads the instance and aligns it with the requested problem and k.
inline ProblemInstance load_instance(const Options& o, std::optional<ProblemKind> kind) {
  if (o.input.empty()) throw UsageError("--input is required");
  auto inst = parse_instance(read_file(o.input));
  if (kind) {
    if (is_directed(*kind) != inst.directed())
      throw UsageError(std::string(to_string(*kind)) + " needs a " + (is_directed(*kind) ? "directed" : "undirected") +
                       " instance");
    inst.kind = *kind;
  }
  if (o.k) {
    if (*o.k < 1) throw UsageError("--k must be positive");
    inst.k = *o.k;
  }
  return inst;
}

inline OracleBudget budget_of(const Options& o, OracleBudget base) {
  if (o.budget) {
    if (*o.budget < 1) throw UsageError("--budget must be positive");
    base.max_structures = *o.budget;
  }
  return base;
}

inline int decision_code(Decision d) {
  switch (d) {
    case Decision::yes: return kYes;
    case Decision::no: return kNo;
    case Decision::unknown: return kInternal;
  }
  return kInternal;
}

inline SolveReport solve(const ProblemInstance& inst, const SolveOptions& options) {
  switch (inst.kind) {
    case ProblemKind::arb: return solve_arb(inst.digraph(), inst.k, options);
    case ProblemKind::flow: return solve_flow(inst.digraph(), inst.k, options);
    case ProblemKind::tree: return solve_tree(inst.undirected(), inst.k, options);
  }
  throw ContractError("unknown problem kind");
}

/// Writes the failing invocation next to the system temp files and returns
/// the path.
inline std::string write_diagnostics(const std::vector<std::string>& args, const std::string& what,
                                     const Options& o) {
  nlohmann::ordered_json j;
  j["args"] = args;
  j["message"] = what;
  if (!o.input.empty()) {
    try {
      j["input"] = read_file(o.input);
    } catch (const UsageError&) {
      j["input"] = nullptr;
    }
  }
  std::string text = j.dump(2);
  auto dir = std::filesystem::temp_directory_path();
  auto path = dir / ("balpack-diagnostics-" + std::to_string(std::hash<std::string>{}(text)) + ".json");
  std::ofstream(path) << text << '\n';
  return path.string();
}

}  // namespace detail

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    args_.assign(argv, argv + argc);
    CLI::App app{"Two disjoint balanced rooted spanning structures", "balpack"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
      sub->add_option("--k", o.k, "Balance parameter");
      sub->add_option("--input", o.input, "Instance file (text or JSON)");
      sub->add_option("--output", o.output, "Write the report here instead of standard output");
      sub->add_option("--format", o.format, "Report rendering")->check(CLI::IsMember({"text", "json"}));
      sub->add_flag("--deterministic,!--no-deterministic", o.deterministic, "Leave timings out of reports");
      sub->add_option("--workers", o.workers, "Threads for the pair search")->check(CLI::PositiveNumber);
      sub->add_option("--budget", o.budget, "Oracle enumeration limit");
      sub->add_option("--p", o.p, "Number of structures (only 2)");
    };
    auto problems = CLI::IsMember({"arb", "flow", "tree"});

    auto* solve = app.add_subcommand("solve", "Decide an instance with the FPT solver");
    solve->add_option("problem", o.problem, "arb, flow or tree")->required()->check(problems);
    common(solve);
    auto* validate = app.add_subcommand("validate", "Check a witness against an instance");
    validate->add_option("problem", o.problem, "arb, flow or tree")->check(problems);
    validate->add_option("--witness", o.witness, "Witness or report JSON")->required();
    common(validate);
    auto* oracle_cmd = app.add_subcommand("oracle", "Decide a small instance exhaustively");
    oracle_cmd->add_option("problem", o.problem, "arb, flow or tree")->required()->check(problems);
    common(oracle_cmd);
    auto* gen = app.add_subcommand("gen", "Generate instances");
    gen->require_subcommand(1);
    auto* gen_sat = gen->add_subcommand("sat", "Reduction gadget from a DIMACS formula");
    common(gen_sat);
    gen_sat->add_option("--q", o.q, "Size of the pendant set (default k)");
    gen_sat->add_option("--copies", o.copies, "Parallel copies per edge")->check(CLI::PositiveNumber);
    gen_sat->add_option("--roles", o.roles, "Write the vertex role map here");
    auto* gen_random = gen->add_subcommand("random", "Seeded random instance");
    common(gen_random);
    gen_random->add_option("problem", o.problem, "arb, flow or tree")->required()->check(problems);
    gen_random->add_option("--n", o.n, "Vertices including the root")->required();
    gen_random->add_option("--arcs", o.arcs, "Random arcs or edges")->required();
    gen_random->add_option("--seed", o.seed, "Generator seed");
    gen_random->add_option("--ensure", o.ensure, "Repair target")
        ->check(CLI::IsMember({"none", "two-root-connected", "connected"}));
    auto* stats = app.add_subcommand("stats", "Summarize an instance");
    stats->add_option("problem", o.problem, "arb, flow or tree")->check(problems);
    common(stats);

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out_ << app.help();
      return kYes;
    } catch (const CLI::ParseError& e) {
      return fail(kUsage, "usage", e.what());
    }

    try {
      if (o.p && *o.p != 2) return fail(kUsage, "usage", "not implemented: p = " + std::to_string(*o.p));
      if (*solve) return do_solve(o);
      if (*validate) return do_validate(o);
      if (*oracle_cmd) return do_oracle(o);
      if (*gen_sat) return do_gen_sat(o);
      if (*gen_random) return do_gen_random(o);
      if (*stats) return do_stats(o);
    } catch (const UsageError& e) {
      return fail(kUsage, "usage", e.what());
    } catch (const ParseError& e) {
      return fail(kUsage, "parse", e.what());
    } catch (const GraphError& e) {
      return fail(kUsage, "graph", e.what());
    } catch (const StructureError& e) {
      return fail(kUsage, "structure", e.what());
    } catch (const ContractError& e) {
      return fail(kUsage, "contract", e.what());
    } catch (const nlohmann::json::exception& e) {
      return fail(kUsage, "parse", e.what());
    } catch (const InvariantViolation& e) {
      return internal(o, e.what());
    } catch (const std::exception& e) {
      return internal(o, e.what());
    }
    return kUsage;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::string> args_;

  void emit(const Options& o, const nlohmann::ordered_json& j) {
    std::string body = o.format == "text" ? detail::render_text(j) : j.dump(2) + "\n";
    if (o.output.empty()) {
      out_ << body;
      return;
    }
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.output);
    file << body;
  }

  int fail(int code, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j{{"error", kind}, {"message", message}};
    out_ << j.dump(2) << '\n';
    err_ << "balpack: " << message << '\n';
    return code;
  }

  int internal(const Options& o, const std::string& message) {
    auto path = detail::write_diagnostics(args_, message, o);
    nlohmann::ordered_json j{{"error", "internal"}, {"message", message}, {"diagnostics", path}};
    out_ << j.dump(2) << '\n';
    err_ << "balpack: internal error, diagnostics in " << path << '\n';
    return kInternal;
  }

  int finish_report(const Options& o, const SolveReport& r) {
    auto j = to_json(r, o.deterministic);
    if (r.decision == Decision::unknown) {
      j["diagnostics"] = detail::write_diagnostics(args_, "oracle budget exhausted", o);
      err_ << "balpack: undecided within the oracle budget\n";
    }
    emit(o, j);
    return detail::decision_code(r.decision);
  }

  int do_solve(const Options& o) {
    auto inst = detail::load_instance(o, detail::kind_of(o.problem));
    SolveOptions options;
    options.workers = o.workers;
    options.deterministic = o.deterministic;
    options.oracle = detail::budget_of(o, options.oracle);
    return finish_report(o, detail::solve(inst, options));
  }

  int do_oracle(const Options& o) {
    auto inst = detail::load_instance(o, detail::kind_of(o.problem));
    auto report = fpt::oracle_stage(inst, detail::budget_of(o, OracleBudget{}));
    if (report.witness) report.verdict = oracle::validate_witness(inst, *report.witness);
    return finish_report(o, report);
  }

  int do_validate(const Options& o) {
    std::optional<ProblemKind> kind;
    if (!o.problem.empty()) kind = detail::kind_of(o.problem);
    auto inst = detail::load_instance(o, kind);
    auto witness = witness_from_json(nlohmann::json::parse(detail::read_file(o.witness)));
    auto verdict = oracle::validate_witness(inst, witness);
    nlohmann::ordered_json j;
    j["problem"] = std::string(to_string(inst.kind));
    j["k"] = inst.k;
    auto v = to_json(verdict);
    for (auto it = v.begin(); it != v.end(); ++it) j[it.key()] = *it;
    emit(o, j);
    return verdict.valid ? kYes : kNo;
  }

  int do_gen_sat(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    auto phi = parse_dimacs(detail::read_file(o.input));
    auto red = sat_reduction(phi, o.q);
    RootedGraph g = o.copies > 1 ? duplicate_edges(red.graph, o.copies) : red.graph;
    ProblemInstance inst{ProblemKind::tree, g, o.k.value_or(red.k)};
    if (!o.roles.empty()) {
      std::ofstream file(o.roles, std::ios::binary);
      if (!file) throw UsageError("cannot write " + o.roles);
      file << roles_to_json(red).dump(2) << '\n';
    }
    emit_instance(o, inst);
    return kYes;
  }

  int do_gen_random(const Options& o) {
    static const std::map<std::string, Ensure> ensures{
        {"none", Ensure::none}, {"two-root-connected", Ensure::two_root_connected}, {"connected", Ensure::connected}};
    auto inst = random_instance(detail::kind_of(o.problem), o.n, o.arcs, o.seed, ensures.at(o.ensure), o.k.value_or(1));
    emit_instance(o, inst);
    return kYes;
  }

  void emit_instance(const Options& o, const ProblemInstance& inst) {
    std::string body = o.format == "text" ? serialize_instance(inst) : instance_to_json(inst).dump() + "\n";
    if (o.output.empty()) {
      out_ << body;
      return;
    }
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.output);
    file << body;
  }

  int do_stats(const Options& o) {
    std::optional<ProblemKind> kind;
    if (!o.problem.empty()) kind = detail::kind_of(o.problem);
    auto inst = detail::load_instance(o, kind);
    const int k = inst.k;
    nlohmann::ordered_json j;
    j["problem"] = std::string(to_string(inst.kind));
    j["k"] = k;
    j["n"] = inst.num_vertices();
    auto capped = cap_parallel(inst);
    if (inst.directed()) {
      const auto& d = inst.digraph();
      j["arcs"] = d.num_arcs();
      j["arcsAfterCap"] = capped.digraph().num_arcs();
      auto view = inst.kind == ProblemKind::flow ? fpt::classify_vertices_flow(d, k) : fpt::classify_vertices(d, k);
      j["largeThreshold"] = view.threshold;
      j["large"] = view.large_vertices();
      j["pool"] = fpt::candidate_pool(d, view, inst.kind == ProblemKind::flow ? 2 * k - 1 : k - 1).size();
      j["twoRootConnected"] = is_k_root_connected(d, 2).connected;
    } else {
      const auto& g = inst.undirected();
      j["edges"] = g.num_edges();
      j["edgesAfterCap"] = capped.undirected().num_edges();
      auto view = fpt::classify_vertices_tree(g, k);
      j["largeThreshold"] = view.threshold;
      j["large"] = view.large_vertices();
      j["pool"] = fpt::candidate_pool(g, view, k - 1).size();
      j["twoSpanningTrees"] = has_two_disjoint_spanning_trees(g);
    }
    emit(o, j);
    return kYes;
  }
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace balpack::cli
