#pragma once

// Coined walks on symmetric arc sets, search coins, and the CMV matrix of
// a walk on the half line.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/models/two_partition.hpp"

namespace qwalk {

enum class ShiftKind { flip_flop, extended };

/// Γ̂ = ŜĈ on ℓ²(A). Coin classes group arcs by terminus, shift classes
/// group them by supporting edge.
struct CoinedWalk {
  MultiGraph graph;
  ArcSet arcs;
  std::vector<VertexIndex> vertex_of_class;  // coin class → vertex
  BlockLocalUnitary coin;
  BlockLocalUnitary shift;
  ShiftKind shift_kind = ShiftKind::flip_flop;
  WalkOperator gamma;

  IndexedBasis basis() const { return gamma.basis; }

  /// Coin class of vertex u (throws for an isolated vertex).
  std::size_t class_of_vertex(VertexIndex u) const {
    for (std::size_t c = 0; c < vertex_of_class.size(); ++c)
      if (vertex_of_class[c] == u) return c;
    throw Error("vertex has no incoming arcs", graph.name(u));
  }
  const Mat& coin_block(VertexIndex u) const { return coin.blocks[class_of_vertex(u)]; }
};

inline IndexedBasis arc_basis(const MultiGraph& g, const ArcSet& arcs) {
  std::vector<std::string> labels;
  for (ArcIndex a = 0; a < arcs.size(); ++a) labels.push_back(arcs.label(g, a));
  return IndexedBasis(std::move(labels));
}

/// Terminus classes of the arcs of g and the vertex of each class.
inline Partition coin_partition(const MultiGraph& g, std::vector<VertexIndex>* vertex_of_class) {
  return ArcSet(g).by_terminus(vertex_of_class);
}

inline Mat swap_block() {
  Mat s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

/// `coin_blocks` follow coin_partition(g). Without `shift_blocks` the shift
/// is the flip-flop Ŝδ_a = δ_ā; otherwise it is the extended shift with one
/// 2×2 unitary per edge acting on (arc (e,+), arc (e,−)).
inline CoinedWalk build_coined(const MultiGraph& g, std::vector<Mat> coin_blocks,
                               std::optional<std::vector<Mat>> shift_blocks = std::nullopt,
                               std::string provenance = "coined") {
  CoinedWalk w;
  w.graph = g;
  w.arcs = ArcSet(g);
  auto cp = w.arcs.by_terminus(&w.vertex_of_class);
  w.coin = block_direct_sum(cp, std::move(coin_blocks));
  auto sp = w.arcs.by_support();
  if (shift_blocks) {
    w.shift_kind = ShiftKind::extended;
    w.shift = block_direct_sum(sp, std::move(*shift_blocks));
  } else {
    w.shift = block_direct_sum(sp, std::vector<Mat>(g.num_edges(), swap_block()));
  }
  SpMat u = w.shift.matrix * w.coin.matrix;
  w.gamma = WalkOperator::make(arc_basis(g, w.arcs), std::move(u), std::move(provenance));
  return w;
}

/// One block per coin class produced by `f(vertex, degree)`.
template <class F>
std::vector<Mat> coins_by(const MultiGraph& g, F&& f) {
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(g, &vc);
  std::vector<Mat> out;
  for (std::size_t c = 0; c < cp.num_classes(); ++c) out.push_back(f(vc[c], cp.members(c).size()));
  return out;
}

inline std::vector<Mat> grover_coins(const MultiGraph& g) {
  return coins_by(g, [](VertexIndex, std::size_t k) { return grover_block(k); });
}

inline CoinedWalk build_grover(const MultiGraph& g) { return build_coined(g, grover_coins(g), std::nullopt, "grover"); }

// ---------------------------------------------------------------------------
// Search coins

enum class SearchCase { reflection_cut, sign_flip };

/// How marked and unmarked vertices are told apart in the reflection-cut
/// coin. `derived`: reflection about α_u at unmarked u and −1 at marked u,
/// which is what the Szegedy sink construction produces. `literal`: the
/// opposite assignment (α_{u,M} = f₀(u)α_u).
enum class CaseIConvention { derived, literal };

inline Mat search_coin(const Vec& alpha, bool marked, SearchCase which,
                       CaseIConvention conv = CaseIConvention::derived) {
  if (std::abs(alpha.norm() - 1.0) > tol::construction)
    throw Error("search coin vector must be a unit vector (norm " + std::to_string(alpha.norm()) + ")");
  const auto n = alpha.size();
  if (which == SearchCase::sign_flip) {
    Mat r = reflection(alpha);
    return marked ? Mat(-r) : r;
  }
  const bool cut = (conv == CaseIConvention::derived) ? marked : !marked;
  return cut ? Mat(-Mat::Identity(n, n)) : reflection(alpha);
}

/// Coined search walk with flip-flop shift. `alphas` are per coin class.
inline CoinedWalk build_coined_search(const MultiGraph& g, const std::vector<Vec>& alphas,
                                      const std::vector<VertexIndex>& marked, SearchCase which,
                                      CaseIConvention conv = CaseIConvention::derived) {
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(g, &vc);
  if (alphas.size() != cp.num_classes())
    throw Error("expected one coin vector per vertex with incoming arcs");
  std::vector<bool> is_marked(g.num_vertices(), false);
  for (auto m : marked) {
    if (m >= g.num_vertices()) throw Error("marked vertex out of range", std::to_string(m));
    is_marked[m] = true;
  }
  std::vector<Mat> blocks;
  for (std::size_t c = 0; c < cp.num_classes(); ++c) {
    if (static_cast<std::size_t>(alphas[c].size()) != cp.members(c).size())
      throw Error("coin vector length differs from the degree", g.name(vc[c]));
    blocks.push_back(search_coin(alphas[c], is_marked[vc[c]], which, conv));
  }
  return build_coined(g, std::move(blocks), std::nullopt,
                      which == SearchCase::sign_flip ? "coined_search_sign_flip" : "coined_search_cut");
}

inline std::vector<Vec> uniform_coin_vectors(const MultiGraph& g) {
  std::vector<VertexIndex> vc;
  auto cp = coin_partition(g, &vc);
  std::vector<Vec> out;
  for (const auto& cls : cp.classes()) {
    const auto k = static_cast<Eigen::Index>(cls.size());
    out.push_back(Vec::Constant(k, cplx(1.0 / std::sqrt(static_cast<double>(k)), 0.0)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CMV

/// Basis (0;−), (1;+), (1;−), (2;+), … truncated to N = |γ| + 1 states.
/// Θ(γ) = [[γ̄, ρ], [ρ, −γ]] with ρ = √(1−|γ|²); the block at indices
/// (j, j+1) uses γ_j. Ŝ carries the blocks with even j, Ĉ those with odd j
/// plus the scalar 1 at index 0; an index left over at the end gets 1.
struct CmvWalk {
  IndexedBasis basis;
  Mat coin;
  Mat shift;
  Mat cmv;  // (ŜĈ)ᵀ
};

inline Mat cmv_theta(cplx g) {
  if (std::abs(g) > 1.0 + tol::construction)
    throw Error("Verblunsky coefficient outside the closed unit disk (|γ| = " + std::to_string(std::abs(g)) + ")");
  const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(g)));
  Mat t(2, 2);
  t << std::conj(g), rho, rho, -g;
  return t;
}

inline CmvWalk build_cmv(const std::vector<cplx>& gammas) {
  if (gammas.empty()) throw Error("CMV needs at least one Verblunsky coefficient");
  const auto n = static_cast<Eigen::Index>(gammas.size() + 1);
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0) labels.push_back("(0;-)");
    else labels.push_back("(" + std::to_string((i + 1) / 2) + (i % 2 ? ";+)" : ";-)"));
  }
  auto fill = [&](Eigen::Index first) {
    Mat m = Mat::Zero(n, n);
    Eigen::Index j = first;
    if (first == 1) m(0, 0) = 1.0;
    for (; j + 1 < n; j += 2) m.block(j, j, 2, 2) = cmv_theta(gammas[static_cast<std::size_t>(j)]);
    if (j < n) m(j, j) = 1.0;
    return m;
  };
  CmvWalk w;
  w.basis = IndexedBasis(std::move(labels));
  w.shift = fill(0);
  w.coin = fill(1);
  w.cmv = (w.shift * w.coin).transpose();
  return w;
}

/// Largest |i − j| with a nonzero entry.
inline Eigen::Index bandwidth(const Mat& m, double tolerance = tol::construction) {
  Eigen::Index b = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > tolerance) b = std::max(b, std::abs(i - j));
  return b;
}

}  // namespace qwalk
