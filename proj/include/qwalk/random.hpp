#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include <Eigen/QR>

#include "qwalk/core.hpp"

namespace qwalk {

using Rng = std::mt19937_64;

/// Seed from QWALK_SEED (decimal), default 0.
inline std::uint64_t seed_from_env() {
  const char* s = std::getenv("QWALK_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error("QWALK_SEED is not a non-negative integer", "QWALK_SEED");
  }
}

/// Haar-random unitary: QR of a complex Gaussian matrix with R's diagonal
/// phases moved into Q.
inline Mat random_unitary(std::size_t k, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(k);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  if (n == 0) return z;
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Mat random_hermitian(std::size_t k, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(k);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (z + z.adjoint());
}

}  // namespace qwalk
