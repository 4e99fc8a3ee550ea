#pragma once

// Dense eigensolvers and subspace helpers.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qwalk/operators.hpp"

namespace qwalk {

/// Makes the largest-modulus entry real positive (lowest index wins ties).
inline void fix_phase(Vec& v, double tie_tol = 1e-12) {
  Eigen::Index best = -1;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs + tie_tol) {
      best_abs = a;
      best = i;
    }
  }
  if (best < 0 || best_abs == 0.0) return;
  v *= std::conj(v(best)) / best_abs;
  v(best) = cplx(std::abs(v(best)), 0.0);
}

/// Principal argument mapped into (−π, π].
inline double principal_phase(cplx z) {
  double p = std::arg(z);
  if (p <= -pi + 1e-12) p = pi;
  return p;
}

struct EigenPair {
  cplx value;
  double phase;
  Vec vector;
};

inline constexpr std::size_t default_eig_cap = 512;

/// Eigendecomposition of a unitary through the complex Schur form. For a
/// normal matrix the triangular factor is diagonal, so the Schur vectors are
/// an orthonormal eigenbasis. Sorted by principal argument.
inline std::vector<EigenPair> eig_unitary(const Mat& u, std::size_t cap = default_eig_cap) {
  if (u.rows() != u.cols()) throw Error("eig_unitary: matrix is not square");
  if (static_cast<std::size_t>(u.rows()) > cap)
    throw Error("eig_unitary: dimension " + std::to_string(u.rows()) + " exceeds cap " +
                std::to_string(cap));
  std::vector<EigenPair> out;
  if (u.rows() == 0) return out;
  Eigen::ComplexSchur<Mat> schur(u);
  if (schur.info() != Eigen::Success) throw Error("eig_unitary: Schur reduction did not converge");
  const Mat& t = schur.matrixT();
  const Mat& q = schur.matrixU();
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    Vec v = q.col(k);
    fix_phase(v);
    const cplx lam = t(k, k);
    out.push_back({lam, principal_phase(lam), std::move(v)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.phase < b.phase; });
  return out;
}

inline std::vector<EigenPair> eig_unitary(const WalkOperator& op, std::size_t cap = default_eig_cap) {
  return eig_unitary(op.dense(), cap);
}

/// Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
struct HermitianEigen {
  RealVec values;
  Mat vectors;
};

inline HermitianEigen hermitian_eigen(const Mat& h) {
  if (h.rows() == 0) return {RealVec(0), Mat(0, 0)};
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw Error("hermitian_eigen: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Orthonormal basis (columns) of ker(m), rank threshold relative to 1.
inline Mat null_space(const Mat& m, double threshold = tol::rank) {
  if (m.cols() == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

/// Modified Gram–Schmidt on the columns, dropping dependent ones.
inline Mat gram_schmidt(const Mat& cols, double drop = 1e-10) {
  std::vector<Vec> basis;
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Vec v = cols.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b * b.dot(v);
    const double n = v.norm();
    if (n > drop) basis.push_back(v / n);
  }
  Mat out(cols.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

/// Groups sorted reals into clusters whose consecutive gaps are ≤ gap.
inline std::vector<std::vector<Eigen::Index>> cluster_sorted(const RealVec& values, double gap) {
  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (out.empty() || values(i) - values(out.back().back()) > gap) out.emplace_back();
    out.back().push_back(i);
  }
  return out;
}

/// Greedy multiset match of two phase lists on the circle; returns the
/// largest angular distance between matched entries (∞ on size mismatch).
inline double phase_multiset_distance(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  auto circ = [](double x, double y) {
    double d = std::fmod(std::abs(x - y), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
  };
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Sorted lists on a circle: try every cyclic alignment and keep the best.
  double best = INFINITY;
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  for (std::size_t shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, circ(a[i], b[(i + shift) % n]));
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace qwalk
