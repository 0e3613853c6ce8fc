#pragma once

// Instance generators: the gadget graph reducing CNF satisfiability to a
// single (r,k)-safe spanning tree, the tree a model induces, and seeded random
// instances for fuzzing.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/graph.hpp"

namespace balpack {

/// Clauses are lists of signed variables (x_i as i, its negation as -i).
struct CnfFormula {
  int variables = 0;
  std::vector<std::vector<int>> clauses;

  int literal_count() const {
    int total = 0;
    for (const auto& c : clauses) total += static_cast<int>(c.size());
    return total;
  }

  /// `assignment[i-1]` is the value of x_i; missing variables count as false.
  bool satisfied_by(const std::vector<bool>& assignment) const {
    auto value = [&](int var) { return var <= static_cast<int>(assignment.size()) && assignment[static_cast<std::size_t>(var - 1)]; };
    for (const auto& c : clauses) {
      bool sat = false;
      for (int lit : c) sat = sat || (lit > 0 ? value(lit) : !value(-lit));
      if (!sat) return false;
    }
    return true;
  }
};

inline void check_formula(const CnfFormula& f) {
  if (f.variables < 1) throw ContractError("formula needs at least one variable");
  if (f.clauses.empty()) throw ContractError("formula needs at least one clause");
  for (const auto& c : f.clauses) {
    if (c.empty() || c.size() > 3) throw ContractError("clauses must have one to three literals");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0 || std::abs(c[i]) > f.variables) throw ContractError("literal references an unknown variable");
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(c[i]) == std::abs(c[j])) throw ContractError("clause repeats a variable");
    }
  }
}

/// DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>` header, then
/// zero-terminated clauses.
inline CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  long long declared = 0;
  std::vector<int> current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto tokens = detail::split_tokens(line);
    if (tokens.empty() || tokens[0][0] == 'c' || tokens[0] == "%") continue;
    if (tokens[0] == "p") {
      if (header) throw ParseError(line_no, "second problem line");
      if (tokens.size() != 4 || tokens[1] != "cnf") throw ParseError(line_no, "expected 'p cnf <vars> <clauses>'");
      auto vars = detail::to_int(tokens[2]);
      auto count = detail::to_int(tokens[3]);
      if (!vars || !count || *vars < 0 || *count < 0 || *vars > 1'000'000)
        throw ParseError(line_no, "bad problem line counts");
      f.variables = static_cast<int>(*vars);
      declared = *count;
      header = true;
      continue;
    }
    if (!header) throw ParseError(line_no, "clause before the problem line");
    for (auto tok : tokens) {
      auto lit = detail::to_int(tok);
      if (!lit) throw ParseError(line_no, "not an integer: " + std::string(tok));
      if (*lit == 0) {
        f.clauses.push_back(current);
        current.clear();
      } else {
        if (std::llabs(*lit) > f.variables) throw ParseError(line_no, "literal beyond the declared variables");
        current.push_back(static_cast<int>(*lit));
      }
    }
  }
  if (!header) throw ParseError(0, "missing problem line");
  if (!current.empty()) f.clauses.push_back(current);
  if (static_cast<long long>(f.clauses.size()) != declared)
    throw ParseError(0, "declared " + std::to_string(declared) + " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

struct ReductionOutput {
  RootedGraph graph{1, 0, {}};
  int k = 0;
  int q = 0;
  int variables = 0;           // after padding to an even count
  int original_variables = 0;
  CnfFormula formula;          // padded
  VertexId t = -1;
  std::vector<std::array<VertexId, 2>> layer;  // {v_i, not v_i}, i = 1..l
  std::vector<VertexId> clause_vertex;
  std::vector<VertexId> q_vertices;
  std::vector<std::string> roles;  // per vertex
};

inline nlohmann::ordered_json roles_to_json(const ReductionOutput& out) {
  nlohmann::ordered_json j;
  j["k"] = out.k;
  j["q"] = out.q;
  j["variables"] = out.variables;
  j["clauses"] = out.formula.clauses.size();
  j["roles"] = out.roles;
  return j;
}

/// Gadget graph with n = q + k + l + 1 vertices. k counts every literal
/// occurrence: k = 1 + l + (l/2) L + m. q defaults to k.
inline ReductionOutput sat_reduction(const CnfFormula& phi, std::optional<int> q_opt = std::nullopt) {
  check_formula(phi);
  ReductionOutput out;
  out.original_variables = phi.variables;
  out.formula = phi;
  if (out.formula.variables % 2 == 1) ++out.formula.variables;  // unused padding variable
  const int l = out.formula.variables;
  const int m = static_cast<int>(phi.clauses.size());
  const int interior = l / 2;
  out.variables = l;
  out.k = 1 + l + interior * phi.literal_count() + m;
  out.q = q_opt.value_or(out.k);
  if (out.q <= out.k - l - 1)
    throw ContractError("q must exceed k - l - 1 = " + std::to_string(out.k - l - 1));

  std::vector<std::string> roles{"r"};
  auto add = [&](std::string role) {
    roles.push_back(std::move(role));
    return static_cast<VertexId>(roles.size()) - 1;
  };
  for (int i = 1; i <= l; ++i) {
    VertexId pos = add("v" + std::to_string(i));
    VertexId neg = add("~v" + std::to_string(i));
    out.layer.push_back({pos, neg});
  }
  out.t = add("t");
  for (int j = 1; j <= m; ++j) out.clause_vertex.push_back(add("c" + std::to_string(j)));

  std::vector<Edge> edges;
  for (VertexId v : out.layer[0]) edges.push_back({0, v});
  for (int i = 0; i + 1 < l; ++i)
    for (VertexId a : out.layer[static_cast<std::size_t>(i)])
      for (VertexId b : out.layer[static_cast<std::size_t>(i) + 1]) edges.push_back({a, b});
  for (VertexId v : out.layer.back()) edges.push_back({v, out.t});
  for (int j = 0; j < m; ++j) {
    const auto& clause = phi.clauses[static_cast<std::size_t>(j)];
    for (std::size_t s = 0; s < clause.size(); ++s) {
      int lit = clause[s];
      VertexId end = out.layer[static_cast<std::size_t>(std::abs(lit) - 1)][lit > 0 ? 0 : 1];
      VertexId prev = out.clause_vertex[static_cast<std::size_t>(j)];
      for (int p = 1; p <= interior; ++p) {
        VertexId mid = add("p" + std::to_string(j + 1) + "." + std::to_string(s + 1) + "." + std::to_string(p));
        edges.push_back({prev, mid});
        prev = mid;
      }
      edges.push_back({prev, end});
    }
  }
  for (int i = 1; i <= out.q; ++i) {
    VertexId v = add("q" + std::to_string(i));
    out.q_vertices.push_back(v);
    edges.push_back({out.t, v});
  }
  out.roles = std::move(roles);
  const int n = static_cast<int>(out.roles.size());
  if (n != out.q + out.k + l + 1) throw InvariantViolation("gadget vertex count is off");
  out.graph = RootedGraph(n, 0, std::move(edges));
  return out;
}

/// The spanning tree a model induces: the path P through the layers (v_i for
/// false, not v_i for true) extended by t and Q, and a search tree of the
/// rest hung from the other vertex of the first layer.
inline EdgeSelection witness_tree_from_assignment(const ReductionOutput& out, const std::vector<bool>& assignment) {
  if (!out.formula.satisfied_by(assignment)) throw ContractError("assignment does not satisfy the formula");
  const RootedGraph& g = out.graph;
  const int l = out.variables;
  auto value = [&](int i) { return i < static_cast<int>(assignment.size()) && assignment[static_cast<std::size_t>(i)]; };
  std::vector<char> on_path(static_cast<std::size_t>(g.num_vertices()), 0);
  std::vector<VertexId> path;
  for (int i = 0; i < l; ++i) {
    VertexId v = out.layer[static_cast<std::size_t>(i)][value(i) ? 1 : 0];
    path.push_back(v);
    on_path[static_cast<std::size_t>(v)] = 1;
  }
  on_path[static_cast<std::size_t>(out.t)] = 1;
  for (VertexId v : out.q_vertices) on_path[static_cast<std::size_t>(v)] = 1;

  auto edge_between = [&](VertexId a, VertexId b) {
    for (EdgeId e : g.incident(a))
      if (g.other(e, a) == b) return e;
    throw InvariantViolation("gadget edge missing");
  };
  std::vector<int> tree{edge_between(0, path[0])};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) tree.push_back(edge_between(path[i], path[i + 1]));
  tree.push_back(edge_between(path.back(), out.t));
  for (VertexId v : out.q_vertices) tree.push_back(edge_between(out.t, v));

  VertexId start = out.layer[0][value(0) ? 0 : 1];
  tree.push_back(edge_between(0, start));
  std::vector<char> seen = on_path;
  seen[0] = 1;
  seen[static_cast<std::size_t>(start)] = 1;
  std::vector<VertexId> queue{start};
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (EdgeId e : g.incident(queue[qi])) {
      VertexId w = g.other(e, queue[qi]);
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      tree.push_back(e);
      queue.push_back(w);
    }
  if (static_cast<int>(tree.size()) != g.num_vertices() - 1)
    throw InvariantViolation("remainder of a satisfied gadget is disconnected");
  return EdgeSelection(std::move(tree));
}

enum class Ensure { none, two_root_connected, connected };

/// `arcs` random arcs (edges for trees) from a seeded generator, then
/// canonical root arcs added until `ensure` holds.
inline ProblemInstance random_instance(ProblemKind kind, int n, int arcs, std::uint64_t seed,
                                       Ensure ensure = Ensure::none, int k = 1) {
  if (n < 1) throw ContractError("random instances need n >= 1");
  if (arcs < 0) throw ContractError("arc budget must be non-negative");
  const bool directed = is_directed(kind);
  if (ensure == Ensure::two_root_connected && !directed)
    throw ContractError("2-root-connectivity applies to digraphs");
  if (ensure == Ensure::connected && directed) throw ContractError("connectivity repair applies to graphs");
  const int minimum = ensure == Ensure::two_root_connected ? 2 * (n - 1) : ensure == Ensure::connected ? n - 1 : 0;
  if (arcs < minimum)
    throw ContractError("budget of " + std::to_string(arcs) + " cannot reach the requested connectivity (needs " +
                        std::to_string(minimum) + ")");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(n - lo));
  };
  std::vector<std::pair<VertexId, VertexId>> pairs;
  if (n >= 2)
    while (static_cast<int>(pairs.size()) < arcs) {
      VertexId u = pick(0);
      VertexId v = pick(directed ? 1 : 0);
      if (u != v) pairs.emplace_back(u, v);
    }

  if (directed) {
    std::vector<Arc> list;
    for (auto [u, v] : pairs) list.push_back({u, v});
    while (ensure == Ensure::two_root_connected) {
      RootedDigraph d(n, 0, list);
      auto conn = is_k_root_connected(d, 2);
      if (conn) break;
      const auto& cut = conn.cut->vertices;
      list.push_back({0, *std::min_element(cut.begin(), cut.end())});
    }
    return {kind, RootedDigraph(n, 0, std::move(list)), k};
  }
  std::vector<Edge> list;
  for (auto [u, v] : pairs) list.push_back({u, v});
  if (ensure == Ensure::connected) {
    // Union-find over the random edges; join every other component to the root.
    std::vector<int> comp(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) comp[static_cast<std::size_t>(v)] = v;
    auto find = [&](int x) {
      while (comp[static_cast<std::size_t>(x)] != x) x = comp[static_cast<std::size_t>(x)] = comp[static_cast<std::size_t>(comp[static_cast<std::size_t>(x)])];
      return x;
    };
    for (auto [u, v] : pairs) comp[static_cast<std::size_t>(find(u))] = find(v);
    for (int v = 1; v < n; ++v)
      if (find(v) != find(0)) {
        list.push_back({0, v});
        comp[static_cast<std::size_t>(find(v))] = find(0);
      }
  }
  return {kind, RootedGraph(n, 0, std::move(list)), k};
}

}  // namespace balpack
