#pragma once

// Bipartite walks and the extended Szegedy model on multigraphs, including
// the sink-based search construction.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/graph_ops.hpp"
#include "qwalk/models/two_partition.hpp"

namespace qwalk {

/// (G; Ŵ) with Ŵ = (⊕_y R̂_y)(⊕_x R̂_x) on ℓ²(E).
struct BipartiteWalk {
  BipartiteMultiGraph graph;
  std::vector<VertexIndex> x_of_class;
  std::vector<VertexIndex> y_of_class;
  BlockLocalUnitary rx;
  BlockLocalUnitary ry;
  WalkOperator w;

  IndexedBasis basis() const { return w.basis; }
};

inline IndexedBasis edge_basis(const BipartiteMultiGraph& g) {
  std::vector<std::string> labels;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) labels.push_back(g.edge_label(e));
  return IndexedBasis(std::move(labels));
}

/// Blocks follow the class order of `graph.x_partition()` / `y_partition()`.
inline BipartiteWalk build_bipartite(BipartiteMultiGraph graph, std::vector<Mat> x_blocks,
                                     std::vector<Mat> y_blocks,
                                     std::string provenance = "bipartite") {
  BipartiteWalk b;
  auto xp = graph.x_partition(&b.x_of_class);
  auto yp = graph.y_partition(&b.y_of_class);
  b.rx = block_direct_sum(xp, std::move(x_blocks));
  b.ry = block_direct_sum(yp, std::move(y_blocks));
  SpMat w = b.ry.matrix * b.rx.matrix;
  b.w = WalkOperator::make(edge_basis(graph), std::move(w), std::move(provenance));
  b.graph = std::move(graph);
  return b;
}

// ---------------------------------------------------------------------------
// Extended Szegedy

/// p(e) = 1/deg(V(e)) on E₂: the simple random walk on H.
inline std::vector<double> uniform_transition(const DuplicatedGraph& d) {
  std::vector<std::size_t> deg(d.graph.num_x(), 0);
  for (const auto& e : d.graph.edges()) ++deg[e.x];
  std::vector<double> p;
  for (const auto& e : d.graph.edges()) p.push_back(1.0 / static_cast<double>(deg[e.x]));
  return p;
}

/// q mirrored from p across the copy pairing: q(e) = p(cross(e)).
inline std::vector<double> mirrored(const DuplicatedGraph& d, const std::vector<double>& p) {
  std::vector<double> q(p.size());
  for (EdgeIndex e = 0; e < p.size(); ++e) q[e] = p[d.cross(e)];
  return q;
}

struct SzegedyWalk {
  DuplicatedGraph dup;           // G₂ = (V ⊔ V′, E₂)
  std::vector<double> p;         // on E₂
  std::vector<double> q;         // on E₂
  std::vector<VertexIndex> marked;
  BipartiteMultiGraph graph_m;   // E₂ followed by E₃
  std::vector<EdgeIndex> e3_edges;  // indices in graph_m
  std::vector<Vec> alpha;        // α̃_x on ℓ²(E₂), cut off at marked x
  std::vector<Vec> beta;         // β̃_y on ℓ²(E₂), cut off at marked y
  BipartiteWalk full;            // on ℓ²(E₂^M)
  BipartiteWalk reduced;         // R̂_{Y,M} R̂_{X,M} on ℓ²(E₂)
  StateVector initial;           // on ℓ²(E₂^M)

  const WalkOperator& w() const { return full.w; }
  bool is_marked(VertexIndex v) const {
    return std::find(marked.begin(), marked.end(), v) != marked.end();
  }
};

namespace detail {

inline void check_stochastic(const BipartiteMultiGraph& g, const std::vector<double>& w, bool by_x,
                             const char* name, const std::vector<std::string>& vnames) {
  if (w.size() != g.num_edges())
    throw Error(std::string(name) + " must have one weight per edge of the duplicated graph");
  std::vector<double> sums(by_x ? g.num_x() : g.num_y(), 0.0);
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!(w[e] >= 0.0 && w[e] <= 1.0))
      throw Error(std::string(name) + " weight outside [0,1]", "edge " + std::to_string(e));
    sums[by_x ? g.x_end(e) : g.y_end(e)] += w[e];
  }
  for (std::size_t v = 0; v < sums.size(); ++v)
    if (std::abs(sums[v] - 1.0) > tol::construction)
      throw Error(std::string(name) + " is not stochastic at vertex (sum " + std::to_string(sums[v]) + ")",
                  vnames[v]);
}

inline void check_lift_up(const DuplicatedGraph& d, const std::vector<double>& p,
                          const std::vector<double>& q) {
  const auto& g = d.graph;
  for (VertexIndex u = 0; u < g.num_x(); ++u)
    for (VertexIndex v = 0; v < g.num_x(); ++v) {
      std::vector<double> a, b;
      for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        if (g.x_end(e) == u && g.y_end(e) == v) a.push_back(p[e]);   // E₂(u, v′)
        if (g.x_end(e) == v && g.y_end(e) == u) b.push_back(q[e]);   // E₂(u′, v)
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      bool ok = a.size() == b.size();
      for (std::size_t k = 0; ok && k < a.size(); ++k) ok = std::abs(a[k] - b[k]) <= tol::construction;
      if (!ok)
        throw Error("lift-up condition violated: {p(E2(u,v'))} != {q(E2(u',v))}",
                    g.x_names()[u] + "," + g.x_names()[v]);
    }
}

/// Restriction of a vector on E to the members of one class.
inline Vec restrict_to(const Vec& v, const std::vector<std::size_t>& members) {
  Vec out(static_cast<Eigen::Index>(members.size()));
  for (std::size_t k = 0; k < members.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(members[k]));
  return out;
}

inline std::vector<Mat> reflection_blocks(const Partition& part, const std::vector<Vec>& vecs,
                                          const std::vector<VertexIndex>& vertex_of_class) {
  std::vector<Mat> out;
  for (std::size_t c = 0; c < part.num_classes(); ++c)
    out.push_back(reflection(restrict_to(vecs[vertex_of_class[c]], part.members(c))));
  return out;
}

}  // namespace detail

/// Extended Szegedy walk on duplicate(h) with transition weights p, q on E₂
/// (q defaults to p mirrored across the copy pairing), optionally with the
/// marked vertices turned into sinks.
inline SzegedyWalk build_szegedy_search(const MultiGraph& h, std::vector<double> p,
                                        std::optional<std::vector<double>> q_opt,
                                        std::vector<VertexIndex> marked) {
  SzegedyWalk s;
  s.dup = duplicate(h);
  const auto& g2 = s.dup.graph;
  if (p.empty()) p = uniform_transition(s.dup);
  std::vector<double> q = q_opt ? std::move(*q_opt) : mirrored(s.dup, p);
  detail::check_stochastic(g2, p, true, "p", g2.x_names());
  detail::check_stochastic(g2, q, false, "q", g2.y_names());
  detail::check_lift_up(s.dup, p, q);

  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  for (auto m : marked)
    if (m >= h.num_vertices()) throw Error("marked vertex out of range", std::to_string(m));
  if (!marked.empty() && marked.size() == h.num_vertices())
    throw Error("every vertex is marked: the search walk has no dynamics");
  s.marked = marked;
  s.p = p;
  s.q = q;

  const std::size_t n2 = g2.num_edges();
  const std::size_t nv = h.num_vertices();

  // Cut-off vectors on ℓ²(E₂).
  s.alpha.assign(nv, Vec::Zero(static_cast<Eigen::Index>(n2)));
  s.beta.assign(nv, Vec::Zero(static_cast<Eigen::Index>(n2)));
  for (EdgeIndex e = 0; e < n2; ++e) {
    const auto x = g2.x_end(e), y = g2.y_end(e);
    if (!s.is_marked(x)) s.alpha[x](static_cast<Eigen::Index>(e)) = std::sqrt(p[e]);
    if (!s.is_marked(y)) s.beta[y](static_cast<Eigen::Index>(e)) = std::sqrt(q[e]);
  }

  // Reduced operator on ℓ²(E₂).
  {
    std::vector<VertexIndex> xc, yc;
    auto xp = g2.x_partition(&xc);
    auto yp = g2.y_partition(&yc);
    s.reduced = build_bipartite(g2, detail::reflection_blocks(xp, s.alpha, xc),
                                detail::reflection_blocks(yp, s.beta, yc), "szegedy_reduced");
  }

  // Full operator on ℓ²(E₂ ⊔ E₃) with modified weights p′, q′.
  std::vector<BipartiteEdge> edges = g2.edges();
  for (auto m : marked) {
    s.e3_edges.push_back(edges.size());
    edges.push_back({m, m});
  }
  s.graph_m = BipartiteMultiGraph(g2.x_names(), g2.y_names(), edges);
  const std::size_t nm = s.graph_m.num_edges();
  std::vector<Vec> alpha_m(nv, Vec::Zero(static_cast<Eigen::Index>(nm)));
  std::vector<Vec> beta_m(nv, Vec::Zero(static_cast<Eigen::Index>(nm)));
  for (EdgeIndex e = 0; e < n2; ++e) {
    const auto x = g2.x_end(e), y = g2.y_end(e);
    if (!s.is_marked(x)) alpha_m[x](static_cast<Eigen::Index>(e)) = std::sqrt(p[e]);
    if (!s.is_marked(y)) beta_m[y](static_cast<Eigen::Index>(e)) = std::sqrt(q[e]);
  }
  for (std::size_t k = 0; k < marked.size(); ++k) {
    alpha_m[marked[k]](static_cast<Eigen::Index>(s.e3_edges[k])) = 1.0;
    beta_m[marked[k]](static_cast<Eigen::Index>(s.e3_edges[k])) = 1.0;
  }
  {
    std::vector<VertexIndex> xc, yc;
    auto xp = s.graph_m.x_partition(&xc);
    auto yp = s.graph_m.y_partition(&yc);
    s.full = build_bipartite(s.graph_m, detail::reflection_blocks(xp, alpha_m, xc),
                             detail::reflection_blocks(yp, beta_m, yc),
                             marked.empty() ? "szegedy" : "szegedy_search");
  }

  // ψ₀ = |V|^{-1/2} Σ_{e∈E₂} √p(e) δ_e.
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(nm));
  for (EdgeIndex e = 0; e < n2; ++e)
    psi(static_cast<Eigen::Index>(e)) = std::sqrt(p[e] / static_cast<double>(nv));
  s.initial = StateVector::make(s.full.w.basis, std::move(psi));
  return s;
}

inline SzegedyWalk build_szegedy(const MultiGraph& h, std::vector<double> p = {},
                                 std::optional<std::vector<double>> q = std::nullopt) {
  return build_szegedy_search(h, std::move(p), std::move(q), {});
}

/// Residuals of the reduced-operator conditions on α̃, β̃:
/// (1) α̃_x(e) = β̃_{x′}(f) for crossing pairs, (2) support, (3) norms.
struct SzegedyConditionReport {
  double crossing = 0.0;
  double support = 0.0;
  double norm = 0.0;
};

inline SzegedyConditionReport check_szegedy_conditions(const SzegedyWalk& s) {
  SzegedyConditionReport r;
  const auto& g2 = s.dup.graph;
  for (EdgeIndex e = 0; e < g2.num_edges(); ++e) {
    const auto x = g2.x_end(e);
    const auto f = s.dup.cross(e);
    r.crossing = std::max(r.crossing, std::abs(s.alpha[x](static_cast<Eigen::Index>(e)) -
                                               s.beta[x](static_cast<Eigen::Index>(f))));
  }
  for (VertexIndex x = 0; x < s.alpha.size(); ++x) {
    for (EdgeIndex e = 0; e < g2.num_edges(); ++e)
      if (g2.x_end(e) != x) r.support = std::max(r.support, std::abs(s.alpha[x](static_cast<Eigen::Index>(e))));
    const double want = s.is_marked(x) ? 0.0 : 1.0;
    r.norm = std::max(r.norm, std::abs(s.alpha[x].norm() - want));
  }
  return r;
}

}  // namespace qwalk
