#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/graph_ops.hpp"
#include "qwalk/models/two_partition.hpp"

namespace qwalk {

enum class StaggeredSearch { none, query, sandwich };
enum class HamiltonianForm { adjacency, reflection };

/// Û = F̂Ê on ℓ²(V) with Ê = ⊕_p exp(iθ₁Ĥ_p) over T₁ polygons and F̂ the
/// same over T₂. With marked vertices Û_M = 2Σ_{u∈M}|u⟩⟨u| − 1 is applied
/// as F̂ÊÛ_M (query) or F̂Û_MÊÛ_M (sandwich).
struct StaggeredWalk {
  TessellationCover cover;
  std::vector<Mat> h1, h2;  // empty when built from explicit unitaries
  double theta1 = 0.0;
  double theta2 = 0.0;
  BlockLocalUnitary e_op;
  BlockLocalUnitary f_op;
  std::vector<VertexIndex> marked;
  StaggeredSearch search = StaggeredSearch::none;
  WalkOperator u;

  IndexedBasis basis() const { return u.basis; }
};

/// Adjacency matrix restricted to each polygon (J − I on a clique).
inline std::vector<Mat> adjacency_hamiltonians(const MultiGraph& g, const Partition& tess) {
  const auto adj = g.adjacency();
  std::vector<Mat> out;
  for (const auto& poly : tess.classes()) {
    const auto k = static_cast<Eigen::Index>(poly.size());
    Mat h(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        h(i, j) = adj(static_cast<Eigen::Index>(poly[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(poly[static_cast<std::size_t>(j)]));
    out.push_back(std::move(h));
  }
  return out;
}

/// Ĥ_p = 2|α_p⟩⟨α_p| − 1 with α_p uniform on the polygon.
inline std::vector<Mat> reflection_hamiltonians(const Partition& tess) {
  std::vector<Mat> out;
  for (const auto& poly : tess.classes()) out.push_back(grover_block(poly.size()));
  return out;
}

namespace detail {

inline void require_valid_cover(const TessellationCover& cover) {
  auto rep = validate_tessellation_cover(cover);
  if (!rep.graph_simple) throw Error("staggered walk needs a simple graph");
  if (!rep.non_clique_polygons.empty()) {
    const auto& p = rep.non_clique_polygons.front();
    throw Error("polygon is not a clique",
                "T" + std::to_string(p.tessellation) + " polygon " + std::to_string(p.polygon));
  }
  if (!rep.uncovered_edges.empty())
    throw Error("edge is not covered by any polygon", "edge " + std::to_string(rep.uncovered_edges.front()));
}

inline SpMat query_oracle(std::size_t n, const std::vector<VertexIndex>& marked) {
  SpMat m = -sparse_identity(n);
  for (auto v : marked) {
    if (v >= n) throw Error("marked vertex out of range", std::to_string(v));
    m.coeffRef(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) = 1.0;
  }
  return m;
}

inline StaggeredWalk finish_staggered(StaggeredWalk w, std::vector<Mat> e_blocks, std::vector<Mat> f_blocks,
                                      std::vector<VertexIndex> marked, StaggeredSearch search) {
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  if (search == StaggeredSearch::none && !marked.empty())
    throw Error("marked vertices given without a search form");
  w.e_op = block_direct_sum(w.cover.tess1, std::move(e_blocks));
  w.f_op = block_direct_sum(w.cover.tess2, std::move(f_blocks));
  const std::size_t n = w.cover.graph.num_vertices();
  SpMat u;
  if (search == StaggeredSearch::none) {
    u = w.f_op.matrix * w.e_op.matrix;
  } else {
    const SpMat um = query_oracle(n, marked);
    if (search == StaggeredSearch::query) u = SpMat(w.f_op.matrix * w.e_op.matrix) * um;
    else u = SpMat(SpMat(w.f_op.matrix * um) * w.e_op.matrix) * um;
  }
  w.marked = std::move(marked);
  w.search = search;
  w.u = WalkOperator::make(IndexedBasis(w.cover.graph.names()), std::move(u),
                           search == StaggeredSearch::none ? "staggered" : "staggered_search");
  return w;
}

}  // namespace detail

/// Hamiltonian blocks follow the polygon order of each tessellation.
inline StaggeredWalk build_staggered(TessellationCover cover, std::vector<Mat> h1, std::vector<Mat> h2,
                                     double theta1, double theta2,
                                     StaggeredSearch search = StaggeredSearch::none,
                                     std::vector<VertexIndex> marked = {}) {
  detail::require_valid_cover(cover);
  if (h1.size() != cover.tess1.num_classes() || h2.size() != cover.tess2.num_classes())
    throw Error("expected one Hamiltonian per polygon");
  std::vector<Mat> eb, fb;
  for (const auto& h : h1) eb.push_back(hermitian_exp(h, theta1));
  for (const auto& h : h2) fb.push_back(hermitian_exp(h, theta2));
  StaggeredWalk w;
  w.cover = std::move(cover);
  w.h1 = std::move(h1);
  w.h2 = std::move(h2);
  w.theta1 = theta1;
  w.theta2 = theta2;
  return detail::finish_staggered(std::move(w), std::move(eb), std::move(fb), std::move(marked), search);
}

inline StaggeredWalk build_staggered(TessellationCover cover, HamiltonianForm form, double theta1,
                                     double theta2, StaggeredSearch search = StaggeredSearch::none,
                                     std::vector<VertexIndex> marked = {}) {
  std::vector<Mat> h1, h2;
  if (form == HamiltonianForm::adjacency) {
    h1 = adjacency_hamiltonians(cover.graph, cover.tess1);
    h2 = adjacency_hamiltonians(cover.graph, cover.tess2);
  } else {
    h1 = reflection_hamiltonians(cover.tess1);
    h2 = reflection_hamiltonians(cover.tess2);
  }
  return build_staggered(std::move(cover), std::move(h1), std::move(h2), theta1, theta2, search,
                         std::move(marked));
}

/// Staggered walk given directly by its polygon unitaries.
inline StaggeredWalk build_staggered_from_unitaries(TessellationCover cover, std::vector<Mat> e_blocks,
                                                    std::vector<Mat> f_blocks,
                                                    StaggeredSearch search = StaggeredSearch::none,
                                                    std::vector<VertexIndex> marked = {}) {
  detail::require_valid_cover(cover);
  StaggeredWalk w;
  w.cover = std::move(cover);
  return detail::finish_staggered(std::move(w), std::move(e_blocks), std::move(f_blocks), std::move(marked),
                                  search);
}

// ---------------------------------------------------------------------------
// Hypergraph walks

/// Two-partition walk on the incidence set 𝒜 of a hypergraph. Vertex blocks
/// follow the π₁ classes (one per vertex that lies in some hyperedge),
/// hyperedge blocks follow the hyperedges.
inline TwoPartitionWalk build_hypergraph_walk(const Hypergraph& h, std::vector<Mat> vertex_blocks,
                                              std::vector<Mat> edge_blocks) {
  auto inc = hypergraph_incidence(h);
  return build_two_partition(std::move(inc.partitions), std::move(vertex_blocks), std::move(edge_blocks),
                             "hypergraph");
}

/// Grover blocks on vertices and hyperedges.
inline TwoPartitionWalk build_hypergraph_grover(const Hypergraph& h) {
  auto inc = hypergraph_incidence(h);
  std::vector<Mat> vb, eb;
  for (const auto& c : inc.partitions.pi1.classes()) vb.push_back(grover_block(c.size()));
  for (const auto& c : inc.partitions.pi2.classes()) eb.push_back(grover_block(c.size()));
  return build_two_partition(std::move(inc.partitions), std::move(vb), std::move(eb), "hypergraph");
}

}  // namespace qwalk
