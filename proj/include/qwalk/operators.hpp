#pragma once

// Complex linear algebra over graph-indexed bases: bases and states,
// block-diagonal local unitaries, reflections, Hermitian exponentials,
// unitarity and locality checks.

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Bases and states

class IndexedBasis {
 public:
  IndexedBasis() = default;
  explicit IndexedBasis(std::vector<std::string> labels) : labels_(std::move(labels)) {
    index_ = detail::index_names(labels_, "basis label");
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error("unknown basis label", label);
    return it->second;
  }
  bool operator==(const IndexedBasis& o) const { return labels_ == o.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct StateVector {
  IndexedBasis basis;
  Vec amplitudes;

  static StateVector make(IndexedBasis basis, Vec amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != basis.size())
      throw Error("state dimension does not match its basis");
    if (!std::isfinite(amplitudes.norm())) throw Error("state has non-finite norm");
    return StateVector{std::move(basis), std::move(amplitudes)};
  }

  static StateVector delta(IndexedBasis basis, std::size_t i) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return make(std::move(basis), std::move(v));
  }

  static StateVector uniform(IndexedBasis basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Vec v = Vec::Constant(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    return make(std::move(basis), std::move(v));
  }

  RealVec probabilities() const { return amplitudes.cwiseAbs2(); }
};

// ---------------------------------------------------------------------------
// Matrix helpers

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

/// ‖M*M − I‖_max.
inline double unitarity_defect(const Mat& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m.adjoint() * m - Mat::Identity(m.rows(), m.cols()));
}

inline double unitarity_defect(const SpMat& m) {
  if (m.rows() != m.cols()) return INFINITY;
  SpMat p = SpMat(m.adjoint()) * m;
  double worst = 0.0;
  std::vector<bool> diag_seen(static_cast<std::size_t>(m.rows()), false);
  for (Eigen::Index r = 0; r < p.outerSize(); ++r)
    for (SpMat::InnerIterator it(p, r); it; ++it) {
      cplx v = it.value();
      if (it.row() == it.col()) {
        v -= 1.0;
        diag_seen[static_cast<std::size_t>(it.row())] = true;
      }
      worst = std::max(worst, std::abs(v));
    }
  for (bool seen : diag_seen)
    if (!seen) worst = std::max(worst, 1.0);
  return worst;
}

inline double hermiticity_defect(const Mat& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

inline SpMat to_sparse(const Mat& m, double drop = 0.0) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > drop) t.emplace_back(i, j, m(i, j));
  SpMat s(m.rows(), m.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

inline Mat to_dense(const SpMat& s) { return Mat(s); }

inline SpMat sparse_identity(std::size_t n) {
  SpMat s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.setIdentity();
  return s;
}

// ---------------------------------------------------------------------------
// Local unitaries

/// Ê = ⊕_i Ê_i with Ê_i acting on span{δ_ω : ω ∈ class i}. Block rows and
/// columns follow the element order of the class.
struct BlockLocalUnitary {
  Partition partition;
  std::vector<Mat> blocks;
  SpMat matrix;

  std::size_t dimension() const { return partition.ground_size(); }
};

inline BlockLocalUnitary block_direct_sum(const Partition& partition, std::vector<Mat> blocks) {
  if (blocks.size() != partition.num_classes())
    throw Error("block_direct_sum: expected " + std::to_string(partition.num_classes()) +
                " blocks, got " + std::to_string(blocks.size()));
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    const auto& cls = partition.members(c);
    const auto& b = blocks[c];
    if (static_cast<std::size_t>(b.rows()) != cls.size() ||
        static_cast<std::size_t>(b.cols()) != cls.size())
      throw Error("block dimension does not match class size " + std::to_string(cls.size()),
                  "class " + std::to_string(c));
    const double defect = unitarity_defect(b);
    if (defect > tol::construction)
      throw Error("block is not unitary (defect " + std::to_string(defect) + ")",
                  "class " + std::to_string(c));
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = 0; j < cls.size(); ++j) {
        const cplx v = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v != cplx(0.0)) t.emplace_back(cls[i], cls[j], v);
      }
  }
  const auto n = static_cast<Eigen::Index>(partition.ground_size());
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return BlockLocalUnitary{partition, std::move(blocks), std::move(m)};
}

/// Identity blocks for every class.
inline std::vector<Mat> identity_blocks(const Partition& p) {
  std::vector<Mat> out;
  for (const auto& cls : p.classes()) {
    const auto k = static_cast<Eigen::Index>(cls.size());
    out.push_back(Mat::Identity(k, k));
  }
  return out;
}

/// R = 2|α⟩⟨α| − 1 for a unit α; −1 for α = 0 (a cut-off marked class).
inline Mat reflection(const Vec& alpha) {
  const auto n = alpha.size();
  const double norm = alpha.norm();
  if (norm <= tol::construction) return -Mat::Identity(n, n);
  if (std::abs(norm - 1.0) > tol::construction)
    throw Error("reflection vector must have norm 1 or 0 (norm " + std::to_string(norm) + ")");
  const Vec a = alpha / norm;
  return 2.0 * a * a.adjoint() - Mat::Identity(n, n);
}

/// Grover diffusion on k elements: reflection about the uniform vector.
inline Mat grover_block(std::size_t k) {
  const auto n = static_cast<Eigen::Index>(k);
  return reflection(Vec::Constant(n, cplx(1.0 / std::sqrt(static_cast<double>(k)), 0.0)));
}

/// exp(iθH) for Hermitian H via its eigendecomposition.
inline Mat hermitian_exp(const Mat& h, double theta) {
  if (h.rows() != h.cols()) throw Error("hermitian_exp: matrix is not square");
  if (hermiticity_defect(h) > tol::construction) throw Error("hermitian_exp: matrix is not Hermitian");
  if (h.rows() == 0) return h;
  const Mat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const RealVec& lam = es.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::polar(1.0, theta * lam(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Walk operators

struct WalkOperator {
  IndexedBasis basis;
  SpMat matrix;
  std::string provenance;

  std::size_t dimension() const { return basis.size(); }
  Mat dense() const { return Mat(matrix); }

  /// Wraps `matrix` after checking shape and unitarity (1e-10).
  static WalkOperator make(IndexedBasis basis, SpMat matrix, std::string provenance) {
    if (static_cast<std::size_t>(matrix.rows()) != basis.size() ||
        static_cast<std::size_t>(matrix.cols()) != basis.size())
      throw Error("walk operator shape does not match its basis", provenance);
    matrix.makeCompressed();
    const double defect = unitarity_defect(matrix);
    if (defect > tol::verification)
      throw Error("walk operator is not unitary (defect " + std::to_string(defect) + ")", provenance);
    return WalkOperator{std::move(basis), std::move(matrix), std::move(provenance)};
  }
};

inline bool is_local(const SpMat& op, const Partition& partition, double tolerance) {
  if (static_cast<std::size_t>(op.rows()) != partition.ground_size() ||
      static_cast<std::size_t>(op.cols()) != partition.ground_size())
    throw Error("is_local: operator and partition have different dimensions");
  for (Eigen::Index r = 0; r < op.outerSize(); ++r)
    for (SpMat::InnerIterator it(op, r); it; ++it)
      if (!partition.same_class(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col())) &&
          std::abs(it.value()) > tolerance)
        return false;
  return true;
}

inline bool is_local(const WalkOperator& op, const Partition& partition, double tolerance) {
  return is_local(op.matrix, partition, tolerance);
}

inline bool is_unitary(const WalkOperator& op, double tolerance = tol::verification) {
  return unitarity_defect(op.matrix) <= tolerance;
}

}  // namespace qwalk
