#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qwalk {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

// Tolerances shared by every module.
namespace tol {
inline constexpr double construction = 1e-12;
inline constexpr double verification = 1e-10;
inline constexpr double coin_spectrum = 1e-10;
inline constexpr double lift_degenerate = 1e-8;
inline constexpr double cluster_gap = 1e-8;
inline constexpr double rank = 1e-10;
}  // namespace tol

/// Thrown on any precondition or validation failure. `where` names the
/// offending object (a vertex, class index, or JSON key) when known.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string where = {})
      : std::runtime_error(where.empty() ? what : what + " [" + where + "]"),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

inline constexpr double pi = 3.14159265358979323846;

}  // namespace qwalk
