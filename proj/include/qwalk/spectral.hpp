#pragma once

// Boundary operator of a reflection coin, the discriminant T = ∂Ŝ∂*, and
// the spectral map from σ(T) to σ(Γ̂) and σ(Γ̂²).

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/equivalence.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/models/coined.hpp"

namespace qwalk {

/// ∂ : ℓ²(A) → ℓ²(Ṽ) with Ṽ = {(u, ℓ) : 1 ≤ ℓ ≤ dim ker(1 − Ĉ_u)}; row
/// (u, ℓ) is the conjugate of α_u^{(ℓ)} on the arcs entering u.
struct BoundaryOperator {
  Mat d;
  std::vector<std::pair<VertexIndex, std::size_t>> vtilde;
  std::vector<Vec> alpha;  // α_u^{(ℓ)} in coin-class order, one per row
  std::vector<std::string> labels;

  std::size_t rows() const { return vtilde.size(); }
};

inline BoundaryOperator boundary_of(const CoinedWalk& c) {
  BoundaryOperator b;
  const auto na = static_cast<Eigen::Index>(c.arcs.size());
  std::vector<std::vector<cplx>> rows;
  std::vector<std::vector<std::size_t>> cols;
  for (std::size_t k = 0; k < c.coin.partition.num_classes(); ++k) {
    const auto u = c.vertex_of_class[k];
    const Mat& cu = c.coin.blocks[k];
    const auto n = cu.rows();
    if (hermiticity_defect(cu) > tol::coin_spectrum || max_abs(cu * cu - Mat::Identity(n, n)) > tol::coin_spectrum)
      throw Error("coin is not a reflection (needs C = C* and C^2 = 1)", c.graph.name(u));
    const auto he = hermitian_eigen(cu);
    Mat plus(n, 0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (he.values(i) > 0.0) {
        plus.conservativeResize(n, plus.cols() + 1);
        plus.col(plus.cols() - 1) = he.vectors.col(i);
      }
    plus = gram_schmidt(plus);
    const auto& members = c.coin.partition.members(k);
    for (Eigen::Index l = 0; l < plus.cols(); ++l) {
      Vec a = plus.col(l);
      fix_phase(a);
      b.vtilde.emplace_back(u, static_cast<std::size_t>(l));
      b.labels.push_back(c.graph.name(u) + "/" + std::to_string(l + 1));
      b.alpha.push_back(a);
      std::vector<cplx> r;
      for (Eigen::Index i = 0; i < a.size(); ++i) r.push_back(std::conj(a(i)));
      rows.push_back(std::move(r));
      cols.push_back(members);
    }
  }
  b.d = Mat::Zero(static_cast<Eigen::Index>(rows.size()), na);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k)
      b.d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[r][k])) = rows[r][k];
  return b;
}

/// T = ∂Ŝ∂*.
inline Mat discriminant(const BoundaryOperator& b, const SpMat& shift) {
  return b.d * (Mat(shift) * b.d.adjoint());
}

/// Underlying graph G̃ on Ṽ: one arc b per base arc a and pair of labels at
/// o(a), t(a), weighted by w(b) = α_{t(a)}^{(ℓ)}(a).
struct UnderlyingGraph {
  struct Arc {
    std::size_t from, to;  // indices into Ṽ
    ArcIndex base;
    cplx weight;
    std::size_t reverse;   // index of b̄ in `arcs`
  };
  std::vector<std::string> vertices;
  std::vector<Arc> arcs;
};

inline UnderlyingGraph underlying_graph(const CoinedWalk& c, const BoundaryOperator& b) {
  UnderlyingGraph ug;
  ug.vertices = b.labels;
  std::vector<std::vector<std::size_t>> rows_of(c.graph.num_vertices());
  for (std::size_t r = 0; r < b.vtilde.size(); ++r) rows_of[b.vtilde[r].first].push_back(r);
  // Weight of label row r on arc a (a enters the vertex of row r).
  auto weight = [&](std::size_t r, ArcIndex a) {
    return b.alpha[r](static_cast<Eigen::Index>(c.coin.partition.position(a)));
  };
  std::vector<std::vector<std::vector<std::size_t>>> index(c.arcs.size());
  for (ArcIndex a = 0; a < c.arcs.size(); ++a) {
    const auto& to_rows = rows_of[c.arcs.terminus(a)];
    const auto& from_rows = rows_of[c.arcs.origin(a)];
    index[a].assign(to_rows.size(), std::vector<std::size_t>(from_rows.size()));
    for (std::size_t i = 0; i < to_rows.size(); ++i)
      for (std::size_t j = 0; j < from_rows.size(); ++j) {
        index[a][i][j] = ug.arcs.size();
        ug.arcs.push_back({from_rows[j], to_rows[i], a, weight(to_rows[i], a), 0});
      }
  }
  for (ArcIndex a = 0; a < c.arcs.size(); ++a) {
    const auto r = ArcSet::reverse(a);
    for (std::size_t i = 0; i < index[a].size(); ++i)
      for (std::size_t j = 0; j < index[a][i].size(); ++j) ug.arcs[index[a][i][j]].reverse = index[r][j][i];
  }
  return ug;
}

/// (Tf)(ũ) = Σ_{t(b)=ũ} conj(w(b)) w(b̄) f(o(b)), assembled as a matrix.
inline Mat discriminant_from_underlying(const UnderlyingGraph& ug) {
  const auto n = static_cast<Eigen::Index>(ug.vertices.size());
  Mat t = Mat::Zero(n, n);
  for (const auto& b : ug.arcs)
    t(static_cast<Eigen::Index>(b.to), static_cast<Eigen::Index>(b.from)) +=
        std::conj(b.weight) * ug.arcs[b.reverse].weight;
  return t;
}

// ---------------------------------------------------------------------------
// Spectral map

enum class EigenOrigin { inherited, birth };

struct SpectralEigenspace {
  cplx value;
  double phase;
  Mat vectors;  // columns, orthonormal
  EigenOrigin origin;
  double t_value = NAN;  // cos θ for inherited spaces
};

struct SpectralMapResult {
  BoundaryOperator boundary;
  Mat t;
  RealVec t_values;
  std::vector<SpectralEigenspace> spaces;
  std::size_t dim_inherited = 0;
  std::size_t dim_birth_plus = 0;   // birth space at +1
  std::size_t dim_birth_minus = 0;  // birth space at −1

  std::vector<double> phases() const {
    std::vector<double> out;
    for (const auto& s : spaces)
      for (Eigen::Index k = 0; k < s.vectors.cols(); ++k) out.push_back(s.phase);
    return out;
  }
  std::size_t total_dimension() const { return dim_inherited + dim_birth_plus + dim_birth_minus; }
};

namespace detail {

inline Mat stack(const Mat& a, const Mat& b) {
  Mat out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

inline void require_flip_flop(const CoinedWalk& c) {
  if (c.shift_kind != ShiftKind::flip_flop) throw Error("spectral map needs the flip-flop shift");
}

}  // namespace detail

/// σ(Γ̂) from σ(T): each cos θ ∈ (−1, 1) lifts to e^{±iθ}, cos θ = ±1 gives
/// ±1 directly, and the rest of ℓ²(A) is the birth space ker ∂ ∩ ker(1 ± Ŝ)
/// at ∓1.
inline SpectralMapResult spectral_map(const CoinedWalk& c) {
  detail::require_flip_flop(c);
  SpectralMapResult r;
  r.boundary = boundary_of(c);
  const Mat s = Mat(c.shift.matrix);
  const Mat& d = r.boundary.d;
  const Mat ds = d.adjoint();
  r.t = discriminant(r.boundary, c.shift.matrix);
  const auto he = hermitian_eigen(r.t);
  r.t_values = he.values;
  const auto na = static_cast<Eigen::Index>(c.arcs.size());
  for (const auto& cl : cluster_sorted(he.values, tol::cluster_gap)) {
    double mu = 0.0;
    Mat f(he.vectors.rows(), static_cast<Eigen::Index>(cl.size()));
    for (std::size_t k = 0; k < cl.size(); ++k) {
      mu += he.values(cl[k]);
      f.col(static_cast<Eigen::Index>(k)) = he.vectors.col(cl[k]);
    }
    mu = std::clamp(mu / static_cast<double>(cl.size()), -1.0, 1.0);
    if (std::abs(mu) >= 1.0 - tol::lift_degenerate) {
      const double sgn = mu > 0 ? 1.0 : -1.0;
      r.spaces.push_back({cplx(sgn, 0.0), sgn > 0 ? 0.0 : pi, Mat(ds * f), EigenOrigin::inherited, mu});
      r.dim_inherited += cl.size();
      continue;
    }
    const double theta = std::acos(mu);
    const double scale = 1.0 / (std::sqrt(2.0) * std::sin(theta));
    for (int sign : {+1, -1}) {
      const cplx lam = std::polar(1.0, sign * theta);
      Mat v = scale * (Mat::Identity(na, na) - lam * s) * (ds * f);
      r.spaces.push_back({lam, sign * theta, std::move(v), EigenOrigin::inherited, mu});
      r.dim_inherited += cl.size();
    }
  }
  const Mat id = Mat::Identity(na, na);
  const Mat birth_minus = null_space(detail::stack(d, id - s));  // Ŝψ = ψ, ∂ψ = 0 ⇒ Γ̂ψ = −ψ
  const Mat birth_plus = null_space(detail::stack(d, id + s));   // Ŝψ = −ψ ⇒ Γ̂ψ = +ψ
  if (birth_plus.cols() > 0) r.spaces.push_back({cplx(1.0, 0.0), 0.0, birth_plus, EigenOrigin::birth});
  if (birth_minus.cols() > 0) r.spaces.push_back({cplx(-1.0, 0.0), pi, birth_minus, EigenOrigin::birth});
  r.dim_birth_plus = static_cast<std::size_t>(birth_plus.cols());
  r.dim_birth_minus = static_cast<std::size_t>(birth_minus.cols());
  if (r.total_dimension() != c.arcs.size())
    throw Error("spectral map accounts for " + std::to_string(r.total_dimension()) + " of " +
                std::to_string(c.arcs.size()) + " dimensions");
  return r;
}

/// σ(Γ̂²): inherited phases doubled, birth space ker ∂ ∩ ker ∂Ŝ at 1.
inline SpectralMapResult spectrum_of_square(const CoinedWalk& c) {
  auto base = spectral_map(c);
  SpectralMapResult r;
  r.boundary = base.boundary;
  r.t = base.t;
  r.t_values = base.t_values;
  for (auto& sp : base.spaces) {
    if (sp.origin != EigenOrigin::inherited) continue;
    const cplx v = sp.value * sp.value;
    sp.value = v;
    sp.phase = principal_phase(v);
    r.dim_inherited += static_cast<std::size_t>(sp.vectors.cols());
    r.spaces.push_back(std::move(sp));
  }
  const Mat& d = r.boundary.d;
  const Mat birth = null_space(detail::stack(d, d * Mat(c.shift.matrix)));
  if (birth.cols() > 0) r.spaces.push_back({cplx(1.0, 0.0), 0.0, birth, EigenOrigin::birth});
  r.dim_birth_plus = static_cast<std::size_t>(birth.cols());
  if (r.total_dimension() != c.arcs.size())
    throw Error("squared spectral map accounts for " + std::to_string(r.total_dimension()) + " of " +
                std::to_string(c.arcs.size()) + " dimensions");
  return r;
}

// ---------------------------------------------------------------------------
// Kernels on one side of a bipartite graph

struct BlockKernel {
  double phase;
  Mat basis;  // orthonormal columns in ℓ²(𝒜_X)
};

/// ker(e^{iθ} − Γ̂_XY Γ̂_YX) on ℓ²(𝒜_X) for every eigenphase of Γ̂², as the
/// projection of the Γ̂² eigenspaces onto the arcs entering X. `side[v]` is
/// 0 for X and 1 for Y.
inline std::vector<BlockKernel> bipartite_block_kernels(const CoinedWalk& c, const std::vector<int>& side) {
  if (side.size() != c.graph.num_vertices()) throw Error("side labels must cover every vertex");
  for (EdgeIndex e = 0; e < c.graph.num_edges(); ++e)
    if (side[c.graph.edge(e).u] == side[c.graph.edge(e).v])
      throw Error("edge joins two vertices on the same side", "edge " + std::to_string(e));
  std::vector<std::size_t> ax;
  for (ArcIndex a = 0; a < c.arcs.size(); ++a)
    if (side[c.arcs.terminus(a)] == 0) ax.push_back(a);
  const Mat u = c.gamma.dense();
  const auto eig = eig_unitary(Mat(u * u));
  RealVec phases(static_cast<Eigen::Index>(eig.size()));
  for (std::size_t k = 0; k < eig.size(); ++k) phases(static_cast<Eigen::Index>(k)) = eig[k].phase;
  auto clusters = cluster_sorted(phases, tol::cluster_gap);
  // Phases near ±π sit at both ends of the sorted list.
  if (clusters.size() > 1 && phases(clusters.back().back()) - phases(clusters.front().front()) > 2 * pi - tol::cluster_gap) {
    for (auto i : clusters.front()) clusters.back().push_back(i);
    clusters.erase(clusters.begin());
  }
  std::vector<BlockKernel> out;
  for (const auto& cl : clusters) {
    Mat proj(static_cast<Eigen::Index>(ax.size()), static_cast<Eigen::Index>(cl.size()));
    for (std::size_t k = 0; k < cl.size(); ++k)
      for (std::size_t i = 0; i < ax.size(); ++i)
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            eig[static_cast<std::size_t>(cl[k])].vector(static_cast<Eigen::Index>(ax[i]));
    Mat basis = gram_schmidt(proj, 1e-8);
    if (basis.cols() == 0) continue;
    out.push_back({eig[static_cast<std::size_t>(cl.front())].phase, std::move(basis)});
  }
  return out;
}

/// Kernels of e^{iθ} − Û for a two-partition walk, obtained on the coined
/// side and pulled back through ξ_X∘γ_E. Vectors are columns in ℓ²(Ω).
inline std::vector<BlockKernel> partition_kernels(const TwoPartitionWalk& p) {
  auto bi = partition_to_bipartite(p);
  auto co = bipartite_to_twostep_coined(bi.walk);
  std::vector<int> side(co.walk.graph.num_vertices(), 1);
  for (std::size_t x = 0; x < bi.walk.graph.num_x(); ++x) side[x] = 0;
  auto ks = bipartite_block_kernels(co.walk, side);
  std::vector<std::size_t> ax;
  std::vector<std::size_t> pos(co.walk.arcs.size(), BasisBijection::npos);
  for (ArcIndex a = 0; a < co.walk.arcs.size(); ++a)
    if (side[co.walk.arcs.terminus(a)] == 0) {
      pos[a] = ax.size();
      ax.push_back(a);
    }
  const auto w = bi.gamma_e.then(co.xi_x);
  for (auto& k : ks) {
    Mat v(static_cast<Eigen::Index>(p.omega.size()), k.basis.cols());
    for (std::size_t o = 0; o < p.omega.size(); ++o) v.row(static_cast<Eigen::Index>(o)) = k.basis.row(static_cast<Eigen::Index>(pos[w(o)]));
    k.basis = std::move(v);
  }
  return ks;
}

}  // namespace qwalk
