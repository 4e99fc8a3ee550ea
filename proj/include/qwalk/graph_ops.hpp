#pragma once

// Graph-to-graph constructions: duplication, generalized intersection
// graph, the 2-tessellable graph of a partition pair, line graphs,
// tessellation-cover validation and hypergraph incidence.

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "qwalk/graph.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Duplication

/// Bipartite double cover G₂ = (V ⊔ V′, E₂) of a multigraph H. Each arc a of
/// H yields the edge (t(a), o(a)′), so both (u,v′) and (v,u′) exist for an
/// undirected edge {u,v}. E₂ is ordered by (V(e), V′(e), arc id).
struct DuplicatedGraph {
  BipartiteMultiGraph graph;          // X = V, Y = V′ (same vertex order)
  ArcSet arcs;                        // arcs of H
  std::vector<ArcIndex> arc_of_edge;  // η : E₂ → A
  std::vector<EdgeIndex> edge_of_arc; // η⁻¹ : A → E₂

  /// Partner of e under the copy swap: the E₂ edge of the reversed arc.
  EdgeIndex cross(EdgeIndex e) const { return edge_of_arc[ArcSet::reverse(arc_of_edge[e])]; }

  /// Pair of E₂ edges produced by edge `h_edge` of H.
  std::array<EdgeIndex, 2> edges_of(EdgeIndex h_edge) const {
    return {edge_of_arc[ArcSet::arc_of(h_edge, Orientation::plus)],
            edge_of_arc[ArcSet::arc_of(h_edge, Orientation::minus)]};
  }
};

inline DuplicatedGraph duplicate(const MultiGraph& h) {
  if (!h.is_connected()) throw Error("duplicate: input multigraph is not connected");
  DuplicatedGraph d;
  d.arcs = ArcSet(h);
  std::vector<ArcIndex> order(d.arcs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](ArcIndex a, ArcIndex b) {
    return std::tuple(d.arcs.terminus(a), d.arcs.origin(a), a) <
           std::tuple(d.arcs.terminus(b), d.arcs.origin(b), b);
  });
  std::vector<BipartiteEdge> edges;
  d.arc_of_edge = order;
  d.edge_of_arc.assign(d.arcs.size(), 0);
  for (std::size_t e = 0; e < order.size(); ++e) {
    edges.push_back({d.arcs.terminus(order[e]), d.arcs.origin(order[e])});
    d.edge_of_arc[order[e]] = e;
  }
  std::vector<std::string> primed;
  for (const auto& n : h.names()) primed.push_back(n + "'");
  d.graph = BipartiteMultiGraph(h.names(), std::move(primed), std::move(edges));
  return d;
}

// ---------------------------------------------------------------------------
// Generalized intersection graph

/// G(Ω;π₁,π₂): X = Ω/π₁ (vertex i ↔ class i of π₁), Y = Ω/π₂, one edge per
/// ω. Edges are ordered by (X-end, Y-end, ω).
struct IntersectionGraph {
  BipartiteMultiGraph graph;
  std::vector<EdgeIndex> gamma_e;        // γ_E : Ω → E
  std::vector<std::size_t> omega_of_edge; // γ_E⁻¹
};

inline IntersectionGraph intersection_graph(const PartitionPair& pp) {
  if (pp.pi1.ground_size() != pp.size() || pp.pi2.ground_size() != pp.size())
    throw Error("intersection_graph: partitions do not share the ground set");
  const std::size_t n = pp.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(pp.pi1.class_of(a), pp.pi2.class_of(a), a) <
           std::tuple(pp.pi1.class_of(b), pp.pi2.class_of(b), b);
  });
  IntersectionGraph ig;
  ig.gamma_e.assign(n, 0);
  ig.omega_of_edge = order;
  std::vector<BipartiteEdge> edges;
  for (std::size_t e = 0; e < n; ++e) {
    edges.push_back({pp.pi1.class_of(order[e]), pp.pi2.class_of(order[e])});
    ig.gamma_e[order[e]] = e;
  }
  std::vector<std::string> xs, ys;
  for (std::size_t i = 0; i < pp.pi1.num_classes(); ++i) xs.push_back("C" + std::to_string(i + 1));
  for (std::size_t j = 0; j < pp.pi2.num_classes(); ++j) ys.push_back("D" + std::to_string(j + 1));
  ig.graph = BipartiteMultiGraph(std::move(xs), std::move(ys), std::move(edges));
  return ig;
}

/// Inverse construction: Ω = E, classes by shared X-end / Y-end.
inline PartitionPair partitions_from_bipartite(const BipartiteMultiGraph& g) {
  std::vector<std::string> labels;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) labels.push_back(g.edge_label(e));
  return PartitionPair::make(std::move(labels), g.x_partition(), g.y_partition());
}

// ---------------------------------------------------------------------------
// 2-tessellable graph H(Ω;π₁,π₂)

struct StaggeredGraph {
  TessellationCover cover;
  std::vector<VertexIndex> phi;        // φ : Ω → V
  std::vector<std::size_t> omega_of_vertex;
};

/// Vertices are grouped by π₁ class (so T₁ polygons are contiguous); u ~ v
/// iff φ⁻¹(u), φ⁻¹(v) share a π₁ or a π₂ class.
inline StaggeredGraph staggered_graph(const PartitionPair& pp) {
  const std::size_t n = pp.size();
  StaggeredGraph sg;
  sg.phi.assign(n, 0);
  for (const auto& cls : pp.pi1.classes())
    for (auto w : cls) {
      sg.phi[w] = sg.omega_of_vertex.size();
      sg.omega_of_vertex.push_back(w);
    }
  std::vector<std::string> names;
  for (auto w : sg.omega_of_vertex) names.push_back(pp.omega[w]);
  std::vector<Edge> edges;
  for (VertexIndex a = 0; a < n; ++a)
    for (VertexIndex b = a + 1; b < n; ++b) {
      auto wa = sg.omega_of_vertex[a], wb = sg.omega_of_vertex[b];
      if (pp.pi1.same_class(wa, wb) || pp.pi2.same_class(wa, wb)) edges.push_back({a, b});
    }
  auto map_classes = [&](const Partition& p) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& cls : p.classes()) {
      std::vector<std::size_t> c;
      for (auto w : cls) c.push_back(sg.phi[w]);
      out.push_back(std::move(c));
    }
    return Partition::from_classes(n, std::move(out));
  };
  sg.cover = TessellationCover{MultiGraph(std::move(names), std::move(edges)), map_classes(pp.pi1),
                               map_classes(pp.pi2)};
  return sg;
}

// ---------------------------------------------------------------------------
// Line graph

/// Vertices are the edges of g; two are adjacent iff they share an endpoint
/// (parallel edges share both and are adjacent).
inline MultiGraph line_graph(const MultiGraph& g) {
  std::vector<std::string> names;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) names.push_back("e" + std::to_string(e));
  std::vector<Edge> edges;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    for (EdgeIndex f = e + 1; f < g.num_edges(); ++f) {
      const auto &a = g.edge(e), &b = g.edge(f);
      if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) edges.push_back({e, f});
    }
  return MultiGraph(std::move(names), std::move(edges));
}

inline MultiGraph line_graph(const BipartiteMultiGraph& g) { return line_graph(g.as_multigraph()); }

// ---------------------------------------------------------------------------
// Tessellation cover validation

struct TessellationReport {
  struct Polygon {
    int tessellation;  // 1 or 2
    std::size_t polygon;
  };
  std::vector<Polygon> non_clique_polygons;
  std::vector<EdgeIndex> uncovered_edges;
  bool graph_simple = true;

  bool valid() const { return non_clique_polygons.empty() && uncovered_edges.empty() && graph_simple; }
};

inline TessellationReport validate_tessellation_cover(const TessellationCover& tc) {
  const auto& g = tc.graph;
  if (tc.tess1.ground_size() != g.num_vertices() || tc.tess2.ground_size() != g.num_vertices())
    throw Error("tessellation does not partition the vertex set of the graph");
  TessellationReport rep;
  rep.graph_simple = g.is_simple();
  auto adj = g.adjacency();
  auto check = [&](const Partition& t, int which) {
    for (std::size_t p = 0; p < t.num_classes(); ++p) {
      const auto& poly = t.members(p);
      bool clique = true;
      for (std::size_t i = 0; i < poly.size() && clique; ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
          if (adj(poly[i], poly[j]) == 0.0) {
            clique = false;
            break;
          }
      if (!clique) rep.non_clique_polygons.push_back({which, p});
    }
  };
  check(tc.tess1, 1);
  check(tc.tess2, 2);
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(e);
    if (!tc.tess1.same_class(ed.u, ed.v) && !tc.tess2.same_class(ed.u, ed.v))
      rep.uncovered_edges.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hypergraph incidence

/// 𝒜 = {(e,u) : u ∈ e}, ordered by (e, u); π₁ groups by u, π₂ by e.
struct HypergraphIncidence {
  std::vector<std::pair<std::size_t, VertexIndex>> pairs;
  PartitionPair partitions;
  std::vector<VertexIndex> vertex_of_class;  // π₁ class → vertex
};

inline HypergraphIncidence hypergraph_incidence(const Hypergraph& h) {
  HypergraphIncidence inc;
  std::vector<std::string> labels;
  std::vector<VertexIndex> vkey;
  std::vector<std::size_t> ekey;
  for (std::size_t e = 0; e < h.num_hyperedges(); ++e)
    for (auto u : h.hyperedge(e)) {
      inc.pairs.emplace_back(e, u);
      labels.push_back("(" + std::to_string(e) + "," + h.names()[u] + ")");
      vkey.push_back(u);
      ekey.push_back(e);
    }
  auto pi1 = Partition::from_keys<VertexIndex>(vkey, &inc.vertex_of_class);
  auto pi2 = Partition::from_keys<std::size_t>(ekey);
  inc.partitions = PartitionPair::make(std::move(labels), std::move(pi1), std::move(pi2));
  return inc;
}

/// The graph of a 2-uniform hypergraph: edge e = hyperedge e.
inline MultiGraph graph_of_2uniform(const Hypergraph& h) {
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < h.num_hyperedges(); ++e) {
    const auto& he = h.hyperedge(e);
    if (he.size() != 2) throw Error("hyperedge is not of size 2", "hyperedge " + std::to_string(e));
    edges.push_back({he[0], he[1]});
  }
  return MultiGraph(h.names(), std::move(edges));
}

/// φ : 𝒜 → A for a 2-uniform hypergraph, with t(φ((e,u))) = u.
inline std::vector<ArcIndex> incidence_to_arcs(const Hypergraph& h, const HypergraphIncidence& inc) {
  auto g = graph_of_2uniform(h);
  std::vector<ArcIndex> phi;
  for (const auto& [e, u] : inc.pairs)
    phi.push_back(ArcSet::arc_of(e, g.edge(e).v == u ? Orientation::plus : Orientation::minus));
  return phi;
}

}  // namespace qwalk
