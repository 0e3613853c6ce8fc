#pragma once

// Rooted multigraph data model: directed and undirected variants with stable
// arc/edge identities, id-based selections, and the text/JSON instance format.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "balpack/errors.hpp"

namespace balpack {

using VertexId = int;
using ArcId = int;
using EdgeId = int;

struct Arc {
  VertexId tail;
  VertexId head;
};

struct Edge {
  VertexId u;
  VertexId v;
  VertexId other(VertexId w) const noexcept { return w == u ? v : u; }
};

/// Sorted, duplicate-free set of arc or edge ids. The tag keeps arc and edge
/// selections from being mixed up.
template <class Tag>
class IdSelection {
 public:
  IdSelection() = default;
  explicit IdSelection(std::vector<int> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }
  IdSelection(std::initializer_list<int> ids) : IdSelection(std::vector<int>(ids)) {}

  const std::vector<int>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  bool contains(int id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

  void insert(int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
  }
  void erase(int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) ids_.erase(it);
  }

  bool disjoint_from(const IdSelection& other) const {
    auto a = ids_.begin();
    auto b = other.ids_.begin();
    while (a != ids_.end() && b != other.ids_.end()) {
      if (*a == *b) return false;
      if (*a < *b) ++a; else ++b;
    }
    return true;
  }

  /// Membership as a dense 0/1 mask of length `universe`.
  std::vector<char> mask(std::size_t universe) const {
    std::vector<char> m(universe, 0);
    for (int id : ids_) m[static_cast<std::size_t>(id)] = 1;
    return m;
  }

  friend bool operator==(const IdSelection&, const IdSelection&) = default;
  friend auto operator<=>(const IdSelection& a, const IdSelection& b) { return a.ids_ <=> b.ids_; }

 private:
  std::vector<int> ids_;
};

using ArcSelection = IdSelection<struct ArcSelectionTag>;
using EdgeSelection = IdSelection<struct EdgeSelectionTag>;

/// Loopless directed multigraph with a root of in-degree 0. `n` counts the root.
class RootedDigraph {
 public:
  RootedDigraph(int n, VertexId root, std::vector<Arc> arcs)
      : n_(n), root_(root), arcs_(std::move(arcs)) {
    if (n_ < 1) throw GraphError("vertex count must be at least 1");
    if (root_ < 0 || root_ >= n_) throw GraphError("root out of range");
    out_.assign(static_cast<std::size_t>(n_), {});
    in_.assign(static_cast<std::size_t>(n_), {});
    for (ArcId a = 0; a < num_arcs(); ++a) {
      const Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.tail < 0 || arc.tail >= n_ || arc.head < 0 || arc.head >= n_)
        throw GraphError("arc " + std::to_string(a) + " has an endpoint out of range");
      if (arc.tail == arc.head) throw GraphError("arc " + std::to_string(a) + " is a loop");
      if (arc.head == root_) throw GraphError("arc " + std::to_string(a) + " enters the root");
      out_[static_cast<std::size_t>(arc.tail)].push_back(a);
      in_[static_cast<std::size_t>(arc.head)].push_back(a);
    }
    // Ids grow in input order, so a stable sort by the other endpoint yields
    // (endpoint, id) order.
    for (auto& list : out_)
      std::stable_sort(list.begin(), list.end(),
                       [&](ArcId x, ArcId y) { return head(x) < head(y); });
    for (auto& list : in_)
      std::stable_sort(list.begin(), list.end(),
                       [&](ArcId x, ArcId y) { return tail(x) < tail(y); });
  }

  int num_vertices() const noexcept { return n_; }
  VertexId root() const noexcept { return root_; }
  int num_arcs() const noexcept { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const Arc& arc(ArcId a) const { return arcs_[static_cast<std::size_t>(a)]; }
  VertexId tail(ArcId a) const { return arc(a).tail; }
  VertexId head(ArcId a) const { return arc(a).head; }

  /// Out-arcs of `v` ordered by (head, id).
  std::span<const ArcId> out_arcs(VertexId v) const { return out_[static_cast<std::size_t>(v)]; }
  /// In-arcs of `v` ordered by (tail, id).
  std::span<const ArcId> in_arcs(VertexId v) const { return in_[static_cast<std::size_t>(v)]; }

  /// Distinct out-neighbours, ascending.
  std::vector<VertexId> out_neighbors(VertexId v) const {
    std::vector<VertexId> result;
    for (ArcId a : out_arcs(v))
      if (result.empty() || result.back() != head(a)) result.push_back(head(a));
    return result;
  }

  /// All arcs in (tail, head, id) order.
  std::vector<ArcId> canonical_order() const {
    std::vector<ArcId> order;
    order.reserve(arcs_.size());
    for (VertexId v = 0; v < n_; ++v)
      for (ArcId a : out_arcs(v)) order.push_back(a);
    return order;
  }

  ArcSelection all_arcs() const {
    std::vector<int> ids(arcs_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ArcSelection(std::move(ids));
  }

 private:
  int n_;
  VertexId root_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

/// Loopless undirected multigraph with a designated root. `n` counts the root.
class RootedGraph {
 public:
  RootedGraph(int n, VertexId root, std::vector<Edge> edges)
      : n_(n), root_(root), edges_(std::move(edges)) {
    if (n_ < 1) throw GraphError("vertex count must be at least 1");
    if (root_ < 0 || root_ >= n_) throw GraphError("root out of range");
    inc_.assign(static_cast<std::size_t>(n_), {});
    for (EdgeId e = 0; e < num_edges(); ++e) {
      const Edge& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
        throw GraphError("edge " + std::to_string(e) + " has an endpoint out of range");
      if (ed.u == ed.v) throw GraphError("edge " + std::to_string(e) + " is a loop");
      inc_[static_cast<std::size_t>(ed.u)].push_back(e);
      inc_[static_cast<std::size_t>(ed.v)].push_back(e);
    }
    for (VertexId v = 0; v < n_; ++v) {
      auto& list = inc_[static_cast<std::size_t>(v)];
      std::stable_sort(list.begin(), list.end(), [&](EdgeId x, EdgeId y) {
        return other(x, v) < other(y, v);
      });
    }
  }

  int num_vertices() const noexcept { return n_; }
  VertexId root() const noexcept { return root_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  VertexId other(EdgeId e, VertexId v) const { return edge(e).other(v); }

  /// Incident edges of `v` ordered by (other endpoint, id).
  std::span<const EdgeId> incident(VertexId v) const { return inc_[static_cast<std::size_t>(v)]; }

  std::vector<VertexId> neighbors(VertexId v) const {
    std::vector<VertexId> result;
    for (EdgeId e : incident(v))
      if (result.empty() || result.back() != other(e, v)) result.push_back(other(e, v));
    return result;
  }

  /// Edges in (min endpoint, max endpoint, id) order.
  std::vector<EdgeId> canonical_order() const {
    std::vector<EdgeId> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<EdgeId>(i);
    auto key = [&](EdgeId e) {
      const Edge& ed = edge(e);
      return std::tuple(std::min(ed.u, ed.v), std::max(ed.u, ed.v), e);
    };
    std::sort(order.begin(), order.end(), [&](EdgeId x, EdgeId y) { return key(x) < key(y); });
    return order;
  }

  EdgeSelection all_edges() const {
    std::vector<int> ids(edges_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return EdgeSelection(std::move(ids));
  }

 private:
  int n_;
  VertexId root_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> inc_;
};

enum class ProblemKind { arb, flow, tree };

inline std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::arb: return "arb";
    case ProblemKind::flow: return "flow";
    case ProblemKind::tree: return "tree";
  }
  return "?";
}

inline std::optional<ProblemKind> problem_kind_from(std::string_view s) {
  if (s == "arb") return ProblemKind::arb;
  if (s == "flow") return ProblemKind::flow;
  if (s == "tree") return ProblemKind::tree;
  return std::nullopt;
}

inline bool is_directed(ProblemKind kind) { return kind != ProblemKind::tree; }

struct ProblemInstance {
  ProblemKind kind = ProblemKind::arb;
  std::variant<RootedDigraph, RootedGraph> graph;
  int k = 1;

  bool directed() const { return std::holds_alternative<RootedDigraph>(graph); }
  const RootedDigraph& digraph() const { return std::get<RootedDigraph>(graph); }
  const RootedGraph& undirected() const { return std::get<RootedGraph>(graph); }
  int num_vertices() const {
    return std::visit([](const auto& g) { return g.num_vertices(); }, graph);
  }
};

// ---------------------------------------------------------------------------
// Text and JSON format

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::optional<long long> to_int(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct RawInstance {
  bool directed = true;
  int n = 0;
  VertexId root = 0;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::optional<int> k;
  std::optional<ProblemKind> kind;
};

inline ProblemInstance build_instance(const RawInstance& raw) {
  ProblemKind kind = raw.kind.value_or(raw.directed ? ProblemKind::arb : ProblemKind::tree);
  if (is_directed(kind) != raw.directed)
    throw ParseError(0, "problem kind does not match graph directedness");
  int k = raw.k.value_or(1);
  if (k < 1) throw ParseError(0, "k must be positive");
  if (raw.directed) {
    std::vector<Arc> arcs;
    arcs.reserve(raw.pairs.size());
    for (auto [u, v] : raw.pairs) arcs.push_back({u, v});
    return ProblemInstance{kind, RootedDigraph(raw.n, raw.root, std::move(arcs)), k};
  }
  std::vector<Edge> edges;
  edges.reserve(raw.pairs.size());
  for (auto [u, v] : raw.pairs) edges.push_back({u, v});
  return ProblemInstance{kind, RootedGraph(raw.n, raw.root, std::move(edges)), k};
}

inline void check_pair(const RawInstance& raw, long long u, long long v, int line) {
  if (u < 0 || u >= raw.n || v < 0 || v >= raw.n) throw ParseError(line, "vertex out of range");
  if (u == v) throw ParseError(line, "loop arc");
  if (raw.directed && v == raw.root) throw ParseError(line, "arc enters the root");
}

inline ProblemInstance parse_text(std::string_view text) {
  RawInstance raw;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (tok.size() != 3 || (tok[0] != "D" && tok[0] != "U"))
        throw ParseError(line_no, "malformed header, expected `D n root` or `U n root`");
      auto n = to_int(tok[1]);
      auto r = to_int(tok[2]);
      if (!n || !r || *n < 1 || *n > 100000000) throw ParseError(line_no, "malformed header");
      if (*r < 0 || *r >= *n) throw ParseError(line_no, "root out of range");
      raw.directed = tok[0] == "D";
      raw.n = static_cast<int>(*n);
      raw.root = static_cast<VertexId>(*r);
      have_header = true;
    } else {
      if (tok.size() != 2 && tok.size() != 3) throw ParseError(line_no, "expected `u v [count]`");
      auto u = to_int(tok[0]);
      auto v = to_int(tok[1]);
      if (!u || !v) throw ParseError(line_no, "malformed vertex id");
      long long count = 1;
      if (tok.size() == 3) {
        auto c = to_int(tok[2]);
        if (!c || *c < 1 || *c > 1000000) throw ParseError(line_no, "count must be a positive integer");
        count = *c;
      }
      check_pair(raw, *u, *v, line_no);
      for (long long i = 0; i < count; ++i)
        raw.pairs.emplace_back(static_cast<VertexId>(*u), static_cast<VertexId>(*v));
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  return build_instance(raw);
}

inline ProblemInstance parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  RawInstance raw;
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "D" || kind == "U") {
      raw.directed = kind == "D";
    } else if (auto pk = problem_kind_from(kind)) {
      raw.kind = pk;
      raw.directed = is_directed(*pk);
    } else {
      throw ParseError(0, "unknown kind `" + kind + "`");
    }
    long long n = j.at("n").get<long long>();
    long long r = j.at("root").get<long long>();
    if (n < 1 || n > 100000000) throw ParseError(0, "n must be positive");
    if (r < 0 || r >= n) throw ParseError(0, "root out of range");
    raw.n = static_cast<int>(n);
    raw.root = static_cast<VertexId>(r);
    if (j.contains("k")) raw.k = j.at("k").get<int>();
    const auto& list = j.contains("arcs") ? j.at("arcs") : j.at("edges");
    int item = 0;
    for (const auto& entry : list) {
      ++item;
      if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
        throw ParseError(0, "arc entry " + std::to_string(item) + " must be [u, v] or [u, v, count]");
      long long u = entry[0].get<long long>();
      long long v = entry[1].get<long long>();
      long long count = entry.size() == 3 ? entry[2].get<long long>() : 1;
      if (count < 1) throw ParseError(0, "arc entry " + std::to_string(item) + ": count must be positive");
      try {
        check_pair(raw, u, v, 0);
      } catch (const ParseError& e) {
        throw ParseError(0, "arc entry " + std::to_string(item) + ": " + e.what());
      }
      for (long long i = 0; i < count; ++i)
        raw.pairs.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed instance JSON: ") + e.what());
  }
  return build_instance(raw);
}

template <class Pairs>
std::vector<std::tuple<VertexId, VertexId, int>> run_length(const Pairs& pairs) {
  std::vector<std::tuple<VertexId, VertexId, int>> runs;
  for (auto [u, v] : pairs) {
    if (!runs.empty() && std::get<0>(runs.back()) == u && std::get<1>(runs.back()) == v)
      ++std::get<2>(runs.back());
    else
      runs.emplace_back(u, v, 1);
  }
  return runs;
}

inline std::vector<std::pair<VertexId, VertexId>> endpoint_pairs(const ProblemInstance& inst) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  if (inst.directed()) {
    for (const Arc& a : inst.digraph().arcs()) pairs.emplace_back(a.tail, a.head);
  } else {
    for (const Edge& e : inst.undirected().edges()) pairs.emplace_back(e.u, e.v);
  }
  return pairs;
}

}  // namespace detail

/// Parses the line format (`D n root` / `U n root` then `u v [count]`) or,
/// when the document starts with `{`, its JSON mirror. Multiplicity lines
/// expand to consecutive ids.
inline ProblemInstance parse_instance(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return detail::parse_json(text);
  return detail::parse_text(text);
}

/// Byte-stable text form. Consecutive ids with identical endpoints collapse
/// into one `u v count` line, so parsing reproduces the same ids.
inline std::string serialize_instance(const ProblemInstance& inst) {
  std::ostringstream os;
  os << (inst.directed() ? 'D' : 'U') << ' ' << inst.num_vertices() << ' '
     << std::visit([](const auto& g) { return g.root(); }, inst.graph) << '\n';
  for (auto [u, v, c] : detail::run_length(detail::endpoint_pairs(inst))) {
    os << u << ' ' << v;
    if (c > 1) os << ' ' << c;
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json instance_to_json(const ProblemInstance& inst) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(inst.kind));
  j["n"] = inst.num_vertices();
  j["root"] = std::visit([](const auto& g) { return g.root(); }, inst.graph);
  auto arcs = nlohmann::ordered_json::array();
  for (auto [u, v, c] : detail::run_length(detail::endpoint_pairs(inst)))
    arcs.push_back({u, v, c});
  j["arcs"] = std::move(arcs);
  j["k"] = inst.k;
  return j;
}

// ---------------------------------------------------------------------------
// Parallel-copy capping

/// Result of capping: the reduced instance plus, for each new id, the id it
/// had in the input.
struct CappedInstance {
  ProblemInstance instance;
  std::vector<int> original_id;
};

inline int parallel_cap(ProblemKind kind) { return kind == ProblemKind::flow ? 4 : 2; }

/// Keeps the lowest-id copies of every parallel class up to the cap for the
/// problem kind (2 for arborescences and trees, 4 for flow branchings).
inline CappedInstance cap_parallel_with_ids(const ProblemInstance& inst) {
  const int cap = parallel_cap(inst.kind);
  std::map<std::pair<VertexId, VertexId>, int> seen;
  std::vector<int> kept;
  auto pairs = detail::endpoint_pairs(inst);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto key = pairs[i];
    if (!inst.directed() && key.first > key.second) std::swap(key.first, key.second);
    if (seen[key]++ < cap) kept.push_back(static_cast<int>(i));
  }
  CappedInstance out{inst, kept};
  if (inst.directed()) {
    const auto& d = inst.digraph();
    std::vector<Arc> arcs;
    for (int id : kept) arcs.push_back(d.arc(id));
    out.instance.graph = RootedDigraph(d.num_vertices(), d.root(), std::move(arcs));
  } else {
    const auto& g = inst.undirected();
    std::vector<Edge> edges;
    for (int id : kept) edges.push_back(g.edge(id));
    out.instance.graph = RootedGraph(g.num_vertices(), g.root(), std::move(edges));
  }
  return out;
}

inline ProblemInstance cap_parallel(const ProblemInstance& inst) {
  return cap_parallel_with_ids(inst).instance;
}

// ---------------------------------------------------------------------------
// Sub-structure queries

/// Vertices touched by the selection, plus the root; ascending.
inline std::vector<VertexId> selection_vertices(const RootedDigraph& d, const ArcSelection& sel) {
  std::vector<char> in(static_cast<std::size_t>(d.num_vertices()), 0);
  in[static_cast<std::size_t>(d.root())] = 1;
  for (ArcId a : sel) {
    in[static_cast<std::size_t>(d.tail(a))] = 1;
    in[static_cast<std::size_t>(d.head(a))] = 1;
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < d.num_vertices(); ++v)
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

inline std::vector<VertexId> selection_vertices(const RootedGraph& g, const EdgeSelection& sel) {
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
  in[static_cast<std::size_t>(g.root())] = 1;
  for (EdgeId e : sel) {
    in[static_cast<std::size_t>(g.edge(e).u)] = 1;
    in[static_cast<std::size_t>(g.edge(e).v)] = 1;
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

/// Parent arc per vertex of an r-arborescence selection (-1 for the root and
/// for vertices outside it), or nullopt if the selection is not one.
inline std::optional<std::vector<ArcId>> arborescence_parents(const RootedDigraph& d,
                                                              const ArcSelection& sel) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  std::vector<ArcId> parent(n, -1);
  for (ArcId a : sel) {
    if (a < 0 || a >= d.num_arcs()) return std::nullopt;
    auto h = static_cast<std::size_t>(d.head(a));
    if (parent[h] != -1) return std::nullopt;
    parent[h] = a;
  }
  // Every selected head must trace back to the root without revisiting.
  std::vector<int> state(n, 0);  // 0 unknown, 1 on stack, 2 reaches root
  state[static_cast<std::size_t>(d.root())] = 2;
  std::vector<VertexId> stack;
  for (ArcId a : sel) {
    VertexId v = d.head(a);
    stack.clear();
    while (state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
      ArcId p = parent[static_cast<std::size_t>(v)];
      if (p == -1) return std::nullopt;
      v = d.tail(p);
    }
    if (state[static_cast<std::size_t>(v)] == 1) return std::nullopt;
    for (VertexId w : stack) state[static_cast<std::size_t>(w)] = 2;
  }
  return parent;
}

inline bool is_arborescence(const RootedDigraph& d, const ArcSelection& sel) {
  return arborescence_parents(d, sel).has_value();
}

/// |B_X^v| for every non-root vertex of the arborescence X (v plus descendants).
inline std::map<VertexId, int> subtree_sizes(const RootedDigraph& d, const ArcSelection& sel) {
  auto parents = arborescence_parents(d, sel);
  if (!parents) throw StructureError("selection is not an r-arborescence");
  std::map<VertexId, int> size;
  for (ArcId a : sel) size[d.head(a)] += 1;
  for (ArcId a : sel) {
    // Walk up from each vertex, crediting every proper ancestor below the root.
    VertexId v = d.tail(a);
    while (v != d.root()) {
      size[v] += 1;
      v = d.tail((*parents)[static_cast<std::size_t>(v)]);
    }
  }
  return size;
}

/// Parent vertex per vertex of a tree selection containing the root (-1 for the
/// root and for vertices outside the tree), or nullopt if not such a tree.
inline std::optional<std::vector<VertexId>> tree_parents(const RootedGraph& g,
                                                         const EdgeSelection& sel) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<std::vector<EdgeId>> adj(n);
  for (EdgeId e : sel) {
    if (e < 0 || e >= g.num_edges()) return std::nullopt;
    adj[static_cast<std::size_t>(g.edge(e).u)].push_back(e);
    adj[static_cast<std::size_t>(g.edge(e).v)].push_back(e);
  }
  std::vector<VertexId> parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{g.root()};
  seen[static_cast<std::size_t>(g.root())] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : adj[static_cast<std::size_t>(v)]) {
      VertexId w = g.other(e, v);
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent[static_cast<std::size_t>(w)] = v;
      ++reached;
      stack.push_back(w);
    }
  }
  // Connected to the root and |E| = |V| - 1 means a tree.
  if (reached != sel.size()) return std::nullopt;
  for (EdgeId e : sel)
    if (!seen[static_cast<std::size_t>(g.edge(e).u)]) return std::nullopt;
  return parent;
}

inline bool is_rooted_tree(const RootedGraph& g, const EdgeSelection& sel) {
  return tree_parents(g, sel).has_value();
}

/// |V(C_T^v)| for every non-root vertex of the tree: the number of vertices
/// separated from the root by v.
inline std::map<VertexId, int> hanging_component_sizes(const RootedGraph& g,
                                                       const EdgeSelection& sel) {
  auto parents = tree_parents(g, sel);
  if (!parents) throw StructureError("selection is not a tree containing the root");
  std::map<VertexId, int> size;
  auto verts = selection_vertices(g, sel);
  for (VertexId v : verts)
    if (v != g.root()) size[v] += 0;
  for (VertexId v : verts) {
    if (v == g.root()) continue;
    VertexId u = (*parents)[static_cast<std::size_t>(v)];
    while (u != g.root()) {
      size[u] += 1;
      u = (*parents)[static_cast<std::size_t>(u)];
    }
  }
  return size;
}

/// Replaces every edge by `p` parallel copies; copies of edge e get ids
/// e*p .. e*p+p-1.
inline RootedGraph duplicate_edges(const RootedGraph& g, int p) {
  if (p < 1) throw ContractError("duplicate_edges needs p >= 1");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(g.num_edges()) * static_cast<std::size_t>(p));
  for (const Edge& e : g.edges())
    for (int i = 0; i < p; ++i) edges.push_back(e);
  return RootedGraph(g.num_vertices(), g.root(), std::move(edges));
}

}  // namespace balpack
