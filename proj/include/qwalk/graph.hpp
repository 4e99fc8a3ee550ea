#pragma once

// Combinatorial substrate: multigraphs, arcs, partitions, tessellation
// covers and hypergraphs. All values are immutable after construction.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;
using ArcIndex = std::size_t;

namespace detail {

inline std::unordered_map<std::string, std::size_t> index_names(
    const std::vector<std::string>& names, const char* what) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!idx.emplace(names[i], i).second)
      throw Error(std::string("duplicate ") + what + " id", names[i]);
  }
  return idx;
}

inline std::vector<std::string> numbered_names(std::size_t n, std::size_t base = 0) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i + base));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Partition

/// Decomposition of the index set {0..n-1} into disjoint nonempty classes.
/// Element order inside a class is significant: it is the row order of any
/// local block attached to that class.
class Partition {
 public:
  Partition() = default;

  /// Validates disjointness, coverage and non-emptiness.
  static Partition from_classes(std::size_t ground_size,
                                std::vector<std::vector<std::size_t>> classes) {
    Partition p;
    p.ground_size_ = ground_size;
    p.class_of_.assign(ground_size, npos);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (classes[c].empty()) throw Error("empty partition class", "class " + std::to_string(c));
      for (std::size_t w : classes[c]) {
        if (w >= ground_size)
          throw Error("partition element out of range", "class " + std::to_string(c));
        if (p.class_of_[w] != npos)
          throw Error("partition classes overlap at element " + std::to_string(w),
                      "class " + std::to_string(c));
        p.class_of_[w] = c;
      }
    }
    for (std::size_t w = 0; w < ground_size; ++w)
      if (p.class_of_[w] == npos)
        throw Error("partition does not cover element " + std::to_string(w));
    p.classes_ = std::move(classes);
    p.position_.assign(ground_size, 0);
    for (const auto& cls : p.classes_)
      for (std::size_t k = 0; k < cls.size(); ++k) p.position_[cls[k]] = k;
    return p;
  }

  /// Groups elements by key; classes ordered by ascending key, elements
  /// ascending inside each class. `keys_out` receives the key of each class.
  template <typename Key>
  static Partition from_keys(std::span<const Key> keys, std::vector<Key>* keys_out = nullptr) {
    std::map<Key, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < keys.size(); ++i) groups[keys[i]].push_back(i);
    std::vector<std::vector<std::size_t>> classes;
    if (keys_out) keys_out->clear();
    for (auto& [k, v] : groups) {
      classes.push_back(std::move(v));
      if (keys_out) keys_out->push_back(k);
    }
    return from_classes(keys.size(), std::move(classes));
  }

  std::size_t ground_size() const { return ground_size_; }
  std::size_t num_classes() const { return classes_.size(); }
  const std::vector<std::size_t>& members(std::size_t c) const { return classes_.at(c); }
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  std::size_t class_of(std::size_t w) const { return class_of_.at(w); }
  /// Position of `w` inside its class.
  std::size_t position(std::size_t w) const { return position_.at(w); }
  bool same_class(std::size_t a, std::size_t b) const { return class_of(a) == class_of(b); }

  /// Same classes as sets, ignoring element and class order.
  bool equivalent(const Partition& other) const {
    if (ground_size_ != other.ground_size_ || num_classes() != other.num_classes()) return false;
    for (std::size_t a = 0; a < ground_size_; ++a)
      for (std::size_t b = a + 1; b < ground_size_; ++b)
        if (same_class(a, b) != other.same_class(a, b)) return false;
    return true;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t ground_size_ = 0;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<std::size_t> position_;
};

/// Ω together with its two partitions.
struct PartitionPair {
  std::vector<std::string> omega;  // labels of the ground set
  Partition pi1;
  Partition pi2;

  static PartitionPair make(std::vector<std::string> omega, Partition pi1, Partition pi2) {
    if (pi1.ground_size() != omega.size() || pi2.ground_size() != omega.size())
      throw Error("partitions do not share the ground set (size mismatch)");
    detail::index_names(omega, "ground-set");
    return PartitionPair{std::move(omega), std::move(pi1), std::move(pi2)};
  }
  std::size_t size() const { return omega.size(); }
};

// ---------------------------------------------------------------------------
// MultiGraph

struct Edge {
  VertexIndex u;
  VertexIndex v;
};

/// Undirected multigraph without self-loops. Vertex and edge ids are their
/// positions; names are kept for I/O.
class MultiGraph {
 public:
  MultiGraph() = default;

  MultiGraph(std::vector<std::string> names, std::vector<Edge> edges)
      : names_(std::move(names)), edges_(std::move(edges)) {
    index_ = detail::index_names(names_, "vertex");
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& ed = edges_[e];
      if (ed.u >= names_.size() || ed.v >= names_.size())
        throw Error("edge endpoint is not a declared vertex", "edge " + std::to_string(e));
      if (ed.u == ed.v) throw Error("self-loops are not allowed", "edge " + std::to_string(e));
    }
  }

  static MultiGraph from_names(std::vector<std::string> names,
                               const std::vector<std::pair<std::string, std::string>>& edges) {
    auto idx = detail::index_names(names, "vertex");
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto iu = idx.find(edges[e].first);
      auto iv = idx.find(edges[e].second);
      if (iu == idx.end() || iv == idx.end())
        throw Error("edge endpoint is not a declared vertex", "edge " + std::to_string(e));
      es.push_back({iu->second, iv->second});
    }
    return MultiGraph(std::move(names), std::move(es));
  }

  /// Vertices named 0..n-1.
  static MultiGraph numbered(std::size_t n, std::vector<Edge> edges) {
    return MultiGraph(detail::numbered_names(n), std::move(edges));
  }

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& name(VertexIndex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<VertexIndex> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  VertexIndex vertex(const std::string& name) const {
    auto v = find(name);
    if (!v) throw Error("unknown vertex", name);
    return *v;
  }

  std::size_t degree(VertexIndex v) const {
    std::size_t d = 0;
    for (const auto& e : edges_) d += (e.u == v) + (e.v == v);
    return d;
  }

  std::size_t multiplicity(VertexIndex a, VertexIndex b) const {
    std::size_t m = 0;
    for (const auto& e : edges_)
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) ++m;
    return m;
  }

  bool is_simple() const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      for (std::size_t f = e + 1; f < edges_.size(); ++f) {
        const auto &a = edges_[e], &b = edges_[f];
        if ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u)) return false;
      }
    return true;
  }

  bool adjacent(VertexIndex a, VertexIndex b) const { return multiplicity(a, b) > 0; }

  bool is_connected() const {
    if (names_.empty()) return true;
    std::vector<std::size_t> parent(names_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t comps = names_.size();
    for (const auto& e : edges_) {
      auto a = find(e.u), b = find(e.v);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps == 1;
  }

  /// Two-coloring if one exists (side[v] in {0,1}), else nullopt.
  std::optional<std::vector<int>> bipartition() const {
    std::vector<int> side(names_.size(), -1);
    std::vector<std::vector<VertexIndex>> adj(names_.size());
    for (const auto& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (std::size_t s = 0; s < names_.size(); ++s) {
      if (side[s] != -1) continue;
      side[s] = 0;
      std::vector<VertexIndex> stack{s};
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : adj[x]) {
          if (side[y] == -1) {
            side[y] = 1 - side[x];
            stack.push_back(y);
          } else if (side[y] == side[x]) {
            return std::nullopt;
          }
        }
      }
    }
    return side;
  }

  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(names_.size(), names_.size());
    for (const auto& e : edges_) {
      a(e.u, e.v) += 1.0;
      a(e.v, e.u) += 1.0;
    }
    return a;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Arcs

enum class Orientation { plus, minus };

struct Arc {
  EdgeIndex edge;
  Orientation orientation;
  VertexIndex origin;
  VertexIndex terminus;
};

/// Symmetric arcs of a multigraph. Arc 2e is (e,+) running u→v for edge
/// e = (u,v); arc 2e+1 is (e,−) running v→u.
class ArcSet {
 public:
  ArcSet() = default;

  explicit ArcSet(const MultiGraph& g) : num_vertices_(g.num_vertices()) {
    arcs_.reserve(2 * g.num_edges());
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edge(e);
      arcs_.push_back({e, Orientation::plus, ed.u, ed.v});
      arcs_.push_back({e, Orientation::minus, ed.v, ed.u});
    }
  }

  std::size_t size() const { return arcs_.size(); }
  const Arc& arc(ArcIndex a) const { return arcs_.at(a); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  VertexIndex origin(ArcIndex a) const { return arcs_.at(a).origin; }
  VertexIndex terminus(ArcIndex a) const { return arcs_.at(a).terminus; }
  EdgeIndex support(ArcIndex a) const { return arcs_.at(a).edge; }
  static ArcIndex reverse(ArcIndex a) { return a ^ std::size_t{1}; }
  static ArcIndex arc_of(EdgeIndex e, Orientation o) {
    return 2 * e + (o == Orientation::minus ? 1 : 0);
  }

  /// Arcs grouped by terminus. Class k belongs to the k-th vertex that has
  /// at least one incoming arc; `vertex_of_class` records which.
  Partition by_terminus(std::vector<VertexIndex>* vertex_of_class = nullptr) const {
    std::vector<VertexIndex> keys(arcs_.size());
    for (std::size_t a = 0; a < arcs_.size(); ++a) keys[a] = arcs_[a].terminus;
    return Partition::from_keys<VertexIndex>(keys, vertex_of_class);
  }
  Partition by_origin(std::vector<VertexIndex>* vertex_of_class = nullptr) const {
    std::vector<VertexIndex> keys(arcs_.size());
    for (std::size_t a = 0; a < arcs_.size(); ++a) keys[a] = arcs_[a].origin;
    return Partition::from_keys<VertexIndex>(keys, vertex_of_class);
  }
  Partition by_support() const {
    std::vector<EdgeIndex> keys(arcs_.size());
    for (std::size_t a = 0; a < arcs_.size(); ++a) keys[a] = arcs_[a].edge;
    return Partition::from_keys<EdgeIndex>(keys);
  }

  std::string label(const MultiGraph& g, ArcIndex a) const {
    const auto& r = arcs_.at(a);
    return g.name(r.origin) + ">" + g.name(r.terminus) + "#" + std::to_string(r.edge);
  }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Arc> arcs_;
};

inline ArcSet arcs_of(const MultiGraph& g) { return ArcSet(g); }

// ---------------------------------------------------------------------------
// Bipartite multigraph

struct BipartiteEdge {
  VertexIndex x;  // index into x_names
  VertexIndex y;  // index into y_names
};

class BipartiteMultiGraph {
 public:
  BipartiteMultiGraph() = default;

  BipartiteMultiGraph(std::vector<std::string> x_names, std::vector<std::string> y_names,
                      std::vector<BipartiteEdge> edges)
      : x_names_(std::move(x_names)), y_names_(std::move(y_names)), edges_(std::move(edges)) {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].x >= x_names_.size() || edges_[e].y >= y_names_.size())
        throw Error("bipartite edge endpoint out of range", "edge " + std::to_string(e));
  }

  std::size_t num_x() const { return x_names_.size(); }
  std::size_t num_y() const { return y_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const BipartiteEdge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<BipartiteEdge>& edges() const { return edges_; }
  const std::vector<std::string>& x_names() const { return x_names_; }
  const std::vector<std::string>& y_names() const { return y_names_; }
  VertexIndex x_end(EdgeIndex e) const { return edges_.at(e).x; }
  VertexIndex y_end(EdgeIndex e) const { return edges_.at(e).y; }

  std::size_t multiplicity(VertexIndex x, VertexIndex y) const {
    std::size_t m = 0;
    for (const auto& e : edges_) m += (e.x == x && e.y == y);
    return m;
  }

  /// Classes C_x (shared X-end). Only X vertices with at least one edge get
  /// a class; class k ↔ `x_of_class[k]`.
  Partition x_partition(std::vector<VertexIndex>* x_of_class = nullptr) const {
    std::vector<VertexIndex> keys(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) keys[e] = edges_[e].x;
    return Partition::from_keys<VertexIndex>(keys, x_of_class);
  }
  Partition y_partition(std::vector<VertexIndex>* y_of_class = nullptr) const {
    std::vector<VertexIndex> keys(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) keys[e] = edges_[e].y;
    return Partition::from_keys<VertexIndex>(keys, y_of_class);
  }

  /// Flattened as an ordinary multigraph: X vertices first, then Y.
  MultiGraph as_multigraph() const {
    std::vector<std::string> names;
    for (const auto& n : x_names_) names.push_back("x:" + n);
    for (const auto& n : y_names_) names.push_back("y:" + n);
    std::vector<Edge> es;
    for (const auto& e : edges_) es.push_back({e.x, x_names_.size() + e.y});
    return MultiGraph(std::move(names), std::move(es));
  }

  bool is_connected() const { return as_multigraph().is_connected(); }

  std::string edge_label(EdgeIndex e) const {
    return x_names_[edges_[e].x] + "|" + y_names_[edges_[e].y] + "#" + std::to_string(e);
  }

 private:
  std::vector<std::string> x_names_;
  std::vector<std::string> y_names_;
  std::vector<BipartiteEdge> edges_;
};

// ---------------------------------------------------------------------------
// Tessellation cover and hypergraph

struct TessellationCover {
  MultiGraph graph;  // simple
  Partition tess1;
  Partition tess2;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(std::vector<std::string> names, std::vector<std::vector<VertexIndex>> hyperedges)
      : names_(std::move(names)), hyperedges_(std::move(hyperedges)) {
    detail::index_names(names_, "vertex");
    for (std::size_t e = 0; e < hyperedges_.size(); ++e) {
      auto& he = hyperedges_[e];
      if (he.empty()) throw Error("empty hyperedge", "hyperedge " + std::to_string(e));
      for (auto v : he)
        if (v >= names_.size())
          throw Error("hyperedge vertex is not declared", "hyperedge " + std::to_string(e));
      std::vector<VertexIndex> sorted = he;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("hyperedge repeats a vertex", "hyperedge " + std::to_string(e));
      he = std::move(sorted);
    }
  }

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_hyperedges() const { return hyperedges_.size(); }
  const std::vector<VertexIndex>& hyperedge(std::size_t e) const { return hyperedges_.at(e); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<VertexIndex>> hyperedges_;
};

}  // namespace qwalk
