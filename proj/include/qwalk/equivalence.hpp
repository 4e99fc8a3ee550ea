#pragma once

// Unitary-equivalence converters between walk families. Every converter
// returns the target walk, the basis map, and a numerical certificate.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qwalk/graph_ops.hpp"
#include "qwalk/models/bipartite.hpp"
#include "qwalk/models/coined.hpp"
#include "qwalk/models/lattice.hpp"
#include "qwalk/models/staggered.hpp"
#include "qwalk/models/two_partition.hpp"

namespace qwalk {

/// Injective map η : K → K′ between index sets; 𝒰_η δ_k = δ_{η(k)}.
class BasisBijection {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BasisBijection() = default;
  BasisBijection(std::vector<std::size_t> forward, std::size_t target_size)
      : forward_(std::move(forward)), inverse_(target_size, npos) {
    for (std::size_t k = 0; k < forward_.size(); ++k) {
      const auto t = forward_[k];
      if (t >= target_size) throw Error("basis map sends an index outside the target", std::to_string(k));
      if (inverse_[t] != npos) throw Error("basis map is not injective", std::to_string(t));
      inverse_[t] = k;
    }
  }

  std::size_t source_size() const { return forward_.size(); }
  std::size_t target_size() const { return inverse_.size(); }
  bool bijective() const { return forward_.size() == inverse_.size(); }
  std::size_t operator()(std::size_t k) const { return forward_.at(k); }
  std::size_t preimage(std::size_t t) const { return inverse_.at(t); }
  const std::vector<std::size_t>& forward() const { return forward_; }

  BasisBijection inverted() const {
    if (!bijective()) throw Error("only a bijection can be inverted");
    return BasisBijection(inverse_, forward_.size());
  }
  /// next ∘ this.
  BasisBijection then(const BasisBijection& next) const {
    if (next.source_size() != target_size()) throw Error("composed basis maps do not chain");
    std::vector<std::size_t> f;
    for (auto t : forward_) f.push_back(next(t));
    return BasisBijection(std::move(f), next.target_size());
  }

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

/// 𝒰_η as a permutation matrix (rows: target, cols: source).
inline SpMat relabel_unitary(const BasisBijection& b) {
  if (!b.bijective()) throw Error("relabel_unitary: map is not a bijection");
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < b.source_size(); ++k) t.emplace_back(b(k), k, 1.0);
  const auto n = static_cast<Eigen::Index>(b.source_size());
  SpMat p(n, n);
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

struct EquivalenceCertificate {
  std::string lhs, rhs;
  double residual = INFINITY;      // ‖Θ − 𝒰⁻¹Θ′𝒰‖_max plus leakage out of ran 𝒰
  double alt_residual = NAN;       // ‖Θ − 𝒰Θ′𝒰⁻¹‖_max when that makes sense
  double tolerance = tol::verification;
  bool verdict = false;
};

/// Compares Θ on ℓ²(K) with Θ′ on ℓ²(K′) through η : K → K′. For an
/// injection the entries of Θ′ leaving ran η from inside it count as error.
inline EquivalenceCertificate certify(const Mat& lhs, const Mat& rhs, const BasisBijection& eta,
                                      std::string lhs_name, std::string rhs_name,
                                      double tolerance = tol::verification) {
  if (static_cast<std::size_t>(lhs.rows()) != eta.source_size() ||
      static_cast<std::size_t>(rhs.rows()) != eta.target_size())
    throw Error("certify: operator dimensions do not match the basis map");
  EquivalenceCertificate c;
  c.lhs = std::move(lhs_name);
  c.rhs = std::move(rhs_name);
  c.tolerance = tolerance;
  const auto n = eta.source_size();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r = std::max(r, std::abs(lhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                               rhs(static_cast<Eigen::Index>(eta(i)), static_cast<Eigen::Index>(eta(j)))));
  for (std::size_t t = 0; t < eta.target_size(); ++t) {
    if (eta.preimage(t) != BasisBijection::npos) continue;
    for (std::size_t j = 0; j < n; ++j)
      r = std::max(r, std::abs(rhs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(eta(j)))));
  }
  c.residual = r;
  if (eta.bijective()) {
    // The opposite orientation, 𝒰Θ′𝒰⁻¹, read with the same map.
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a = std::max(a, std::abs(lhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                 rhs(static_cast<Eigen::Index>(eta.preimage(i)),
                                     static_cast<Eigen::Index>(eta.preimage(j)))));
    c.alt_residual = a;
  }
  c.verdict = c.residual <= tolerance;
  return c;
}

inline EquivalenceCertificate certify(const WalkOperator& lhs, const WalkOperator& rhs,
                                      const BasisBijection& eta, double tolerance = tol::verification) {
  return certify(lhs.dense(), rhs.dense(), eta, lhs.provenance, rhs.provenance, tolerance);
}

// ---------------------------------------------------------------------------
// Two-partition → staggered

struct StaggeredConversion {
  StaggeredWalk walk;
  BasisBijection phi;  // Ω → V
  EquivalenceCertificate certificate;
};

inline StaggeredConversion partition_to_staggered(const TwoPartitionWalk& p) {
  auto sg = staggered_graph(p.omega);
  BasisBijection phi(sg.phi, sg.phi.size());
  auto e = relabel_blocks(p.e_op, sg.cover.tess1, sg.omega_of_vertex);
  auto f = relabel_blocks(p.f_op, sg.cover.tess2, sg.omega_of_vertex);
  auto w = build_staggered_from_unitaries(std::move(sg.cover), std::move(e), std::move(f));
  auto cert = certify(p.u, w.u, phi);
  return {std::move(w), std::move(phi), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Two-partition → bipartite

struct BipartiteConversion {
  BipartiteWalk walk;
  BasisBijection gamma_e;  // Ω → E
  EquivalenceCertificate certificate;
};

inline BipartiteConversion partition_to_bipartite(const TwoPartitionWalk& p) {
  auto ig = intersection_graph(p.omega);
  BasisBijection g(ig.gamma_e, ig.gamma_e.size());
  auto xp = ig.graph.x_partition();
  auto yp = ig.graph.y_partition();
  auto rx = relabel_blocks(p.e_op, xp, ig.omega_of_edge);
  auto ry = relabel_blocks(p.f_op, yp, ig.omega_of_edge);
  auto w = build_bipartite(std::move(ig.graph), std::move(rx), std::move(ry));
  auto cert = certify(p.u, w.w, g);
  return {std::move(w), std::move(g), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Bipartite → two-step coined

struct CoinedConversion {
  CoinedWalk walk;        // Γ̂ on the flattened bipartite graph
  BasisBijection xi_x;    // E → 𝒜_X, e ↦ arc from Y(e) into X(e)
  BasisBijection xi_y;    // E → 𝒜_Y
  EquivalenceCertificate certificate;  // Ŵ vs Γ̂² restricted to 𝒜_X
};

inline CoinedConversion bipartite_to_twostep_coined(const BipartiteWalk& b) {
  if (!b.graph.is_connected()) throw Error("bipartite graph is not connected");
  const auto g = b.graph.as_multigraph();
  const std::size_t ne = b.graph.num_edges(), na = 2 * ne;
  std::vector<std::size_t> fx, fy;
  for (EdgeIndex e = 0; e < ne; ++e) {
    fx.push_back(ArcSet::arc_of(e, Orientation::minus));
    fy.push_back(ArcSet::arc_of(e, Orientation::plus));
  }
  BasisBijection xi_x(fx, na), xi_y(fy, na);

  // Edge index of each arc, used to pull the bipartite blocks back.
  std::vector<std::size_t> edge_of_arc(na);
  for (ArcIndex a = 0; a < na; ++a) edge_of_arc[a] = a / 2;
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(g, &vc);
  std::vector<Mat> blocks;
  for (std::size_t c = 0; c < cp.num_classes(); ++c) {
    const auto& members = cp.members(c);
    const bool on_x = vc[c] < b.graph.num_x();
    const auto& src = on_x ? b.rx : b.ry;
    // The single-class partition picks the right block out of `src`.
    auto sub = Partition::from_classes(members.size(), {[&] {
                                         std::vector<std::size_t> all(members.size());
                                         std::iota(all.begin(), all.end(), 0);
                                         return all;
                                       }()});
    std::vector<std::size_t> src_of(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) src_of[k] = edge_of_arc[members[k]];
    blocks.push_back(relabel_blocks(src, sub, src_of).front());
  }
  auto w = build_coined(g, std::move(blocks), std::nullopt, "twostep_coined");
  const Mat u = w.gamma.dense();
  auto cert = certify(b.w.dense(), u * u, xi_x, b.w.provenance, "coined^2");
  return {std::move(w), std::move(xi_x), std::move(xi_y), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Coined (flip-flop) → bipartite on the duplicated graph

/// F̂ = ŜĈŜ as blocks over the origin classes of the arcs.
inline BlockLocalUnitary conjugated_coin(const CoinedWalk& c) {
  if (c.shift_kind != ShiftKind::flip_flop) throw Error("an extended shift has no flip-flop conjugate");
  auto op = c.arcs.by_origin();
  std::vector<std::size_t> reversed(c.arcs.size());
  for (ArcIndex a = 0; a < c.arcs.size(); ++a) reversed[a] = ArcSet::reverse(a);
  return block_direct_sum(op, relabel_blocks(c.coin, op, reversed));
}

struct DuplicateConversion {
  DuplicatedGraph dup;
  BipartiteWalk walk;     // on ℓ²(E₂)
  BasisBijection eta;     // E₂ → A
  bool crossing_ok = false;
  EquivalenceCertificate certificate;  // Ŵ vs Γ̂² through η
};

inline DuplicateConversion coined_square_to_bipartite(const CoinedWalk& c) {
  if (c.shift_kind != ShiftKind::flip_flop)
    throw Error("coined-to-bipartite conversion needs the flip-flop shift");
  DuplicateConversion out;
  out.dup = duplicate(c.graph);
  const auto& g2 = out.dup.graph;
  out.eta = BasisBijection(out.dup.arc_of_edge, c.arcs.size());
  const auto f = conjugated_coin(c);
  auto rx = relabel_blocks(c.coin, g2.x_partition(), out.dup.arc_of_edge);
  auto ry = relabel_blocks(f, g2.y_partition(), out.dup.arc_of_edge);
  out.walk = build_bipartite(g2, std::move(rx), std::move(ry), "duplicated_bipartite");
  out.crossing_ok = true;
  for (ArcIndex a = 0; a < c.arcs.size(); ++a)
    if (g2.x_end(out.dup.edge_of_arc[a]) != g2.y_end(out.dup.edge_of_arc[ArcSet::reverse(a)]))
      out.crossing_ok = false;
  const Mat u = c.gamma.dense();
  out.certificate = certify(out.walk.w.dense(), u * u, out.eta, out.walk.w.provenance, "coined^2");
  return out;
}

/// Γ̂² read as a two-partition walk: Ω = A, π₁ by terminus, π₂ by origin,
/// Ê = Ĉ and F̂ = ŜĈŜ.
inline TwoPartitionWalk twostep_as_two_partition(const CoinedWalk& c) {
  auto f = conjugated_coin(c);
  auto pp = PartitionPair::make(c.gamma.basis.labels(), c.coin.partition, f.partition);
  return build_two_partition(std::move(pp), c.coin.blocks, f.blocks, "coined_twostep");
}

// ---------------------------------------------------------------------------
// Composite maps

struct CompositeCheck {
  EquivalenceCertificate partition_vs_coined;      // Û vs Γ̂² through ξ_X∘γ_E
  EquivalenceCertificate staggered_vs_bipartite;   // staggered Û vs Ŵ through γ_E∘φ⁻¹
  EquivalenceCertificate partition_vs_duplicated;  // Û vs Ŵ₂ through η⁻¹∘ξ_X∘γ_E
};

/// Round trips through every converter starting from a two-partition walk
/// whose intersection graph is connected.
inline CompositeCheck composite_round_trip(const TwoPartitionWalk& p, double tolerance = 1e-9) {
  auto st = partition_to_staggered(p);
  auto bi = partition_to_bipartite(p);
  auto co = bipartite_to_twostep_coined(bi.walk);
  auto du = coined_square_to_bipartite(co.walk);
  const Mat u = p.u.dense();
  const Mat g = co.walk.gamma.dense();
  CompositeCheck out;
  out.partition_vs_coined = certify(u, g * g, bi.gamma_e.then(co.xi_x), p.u.provenance, "coined^2", tolerance);
  out.staggered_vs_bipartite =
      certify(st.walk.u.dense(), bi.walk.w.dense(), st.phi.inverted().then(bi.gamma_e), st.walk.u.provenance,
              bi.walk.w.provenance, tolerance);
  out.partition_vs_duplicated = certify(u, du.walk.w.dense(), bi.gamma_e.then(co.xi_x).then(du.eta.inverted()),
                                        p.u.provenance, du.walk.w.provenance, tolerance);
  return out;
}

// ---------------------------------------------------------------------------
// Vertex basis ↔ arc basis on the torus

struct LatticeIntertwine {
  CoinedWalk arc_walk;   // flip-flop walk on the torus graph
  BasisBijection gamma;  // (x; c) → arc with terminus x in direction c
  EquivalenceCertificate certificate;
};

inline LatticeIntertwine vertex_arc_intertwine(const LatticeWalk& lw) {
  const auto& t = lw.torus;
  const std::size_t d = t.dim(), k = 2 * d;
  const auto g = t.graph();
  std::vector<std::size_t> f(lw.basis.size());
  for (std::size_t x = 0; x < t.num_vertices(); ++x)
    for (std::size_t j = 0; j < d; ++j) {
      // (x; −j) runs x+e_j → x on edge (x, x+e_j); (x; +j) runs x−e_j → x.
      f[lw.state(x, 2 * j)] = ArcSet::arc_of(t.edge_id(x, j), Orientation::minus);
      f[lw.state(x, 2 * j + 1)] = ArcSet::arc_of(t.edge_id(t.neighbor(x, j, -1), j), Orientation::plus);
    }
  BasisBijection gamma(f, 2 * g.num_edges());

  // Arc coin at x: (⊕ swap)·C′(x), rows and columns carried by Γ.
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(g, &vc);
  std::vector<Mat> blocks;
  for (std::size_t c = 0; c < cp.num_classes(); ++c) {
    const auto x = vc[c];
    Mat sw = Mat::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < d; ++j) sw.block(2 * j, 2 * j, 2, 2) = swap_block();
    const Mat cx = sw * lw.coins[x];
    const auto& members = cp.members(c);
    std::vector<std::size_t> comp(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) comp[m] = gamma.preimage(members[m]) - lw.state(x, 0);
    Mat b(cx.rows(), cx.cols());
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t s = 0; s < members.size(); ++s)
        b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
            cx(static_cast<Eigen::Index>(comp[r]), static_cast<Eigen::Index>(comp[s]));
    blocks.push_back(std::move(b));
  }
  auto w = build_coined(g, std::move(blocks), std::nullopt, "lattice_arc");
  auto cert = certify(lw.u, w.gamma, gamma, tol::construction);
  return {std::move(w), std::move(gamma), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Szegedy search ↔ coined search

struct SearchEquivalence {
  SzegedyWalk szegedy;
  CoinedWalk coined;
  EquivalenceCertificate certificate;  // reduced Ŵ vs Γ̂_M² through η
};

/// Coin vectors α_u(a) = √p(η⁻¹(a)) over the arcs entering u.
inline std::vector<Vec> szegedy_coin_vectors(const DuplicatedGraph& d, const MultiGraph& h,
                                             const std::vector<double>& p) {
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(h, &vc);
  std::vector<Vec> out;
  for (const auto& cls : cp.classes()) {
    Vec a(static_cast<Eigen::Index>(cls.size()));
    for (std::size_t k = 0; k < cls.size(); ++k)
      a(static_cast<Eigen::Index>(k)) = std::sqrt(p[d.edge_of_arc[cls[k]]]);
    out.push_back(std::move(a));
  }
  return out;
}

inline SearchEquivalence szegedy_search_equivalence(const MultiGraph& h, std::vector<double> p,
                                                    std::vector<VertexIndex> marked,
                                                    CaseIConvention conv = CaseIConvention::derived) {
  if (conv == CaseIConvention::literal)
    throw Error(
        "the literal reflection-cut convention (reflect at marked, -1 at unmarked) does not match the "
        "Szegedy sink walk; use the derived convention");
  SearchEquivalence out;
  out.szegedy = build_szegedy_search(h, std::move(p), std::nullopt, marked);
  const auto& s = out.szegedy;
  out.coined = build_coined_search(h, szegedy_coin_vectors(s.dup, h, s.p), s.marked, SearchCase::reflection_cut, conv);
  const Mat u = out.coined.gamma.dense();
  out.certificate = certify(s.reduced.w.dense(), u * u, BasisBijection(s.dup.arc_of_edge, s.dup.arcs.size()),
                            s.reduced.w.provenance, out.coined.gamma.provenance + "^2");
  return out;
}

}  // namespace qwalk
