#pragma once

// Walks on the d-dimensional torus Z_N1 × … × Z_Nd in the vertex basis
// ℓ²(V; C^{2d}). Component c = 2(j−1) + s stands for −j (s = 0) or +j
// (s = 1); vertex x is the mixed-radix index with axis 0 fastest.

#include <string>
#include <vector>

#include "qwalk/models/coined.hpp"

namespace qwalk {

class Torus {
 public:
  Torus() = default;
  explicit Torus(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw Error("torus needs at least one axis");
    for (std::size_t j = 0; j < dims_.size(); ++j)
      if (dims_[j] < 3) throw Error("torus side must be at least 3", "axis " + std::to_string(j + 1));
    size_ = 1;
    for (auto n : dims_) size_ *= n;
  }

  std::size_t dim() const { return dims_.size(); }
  const std::vector<std::size_t>& sides() const { return dims_; }
  std::size_t num_vertices() const { return size_; }

  std::vector<std::size_t> coords(std::size_t x) const {
    std::vector<std::size_t> c(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      c[j] = x % dims_[j];
      x /= dims_[j];
    }
    return c;
  }
  std::size_t index(const std::vector<std::size_t>& c) const {
    std::size_t x = 0;
    for (std::size_t j = dims_.size(); j-- > 0;) x = x * dims_[j] + c[j];
    return x;
  }
  /// x + step·e_axis (axis is 0-based, step ±1).
  std::size_t neighbor(std::size_t x, std::size_t axis, int step) const {
    auto c = coords(x);
    const auto n = dims_[axis];
    c[axis] = (c[axis] + (step > 0 ? 1 : n - 1)) % n;
    return index(c);
  }
  std::string name(std::size_t x) const {
    auto c = coords(x);
    std::string s = "(";
    for (std::size_t j = 0; j < c.size(); ++j) s += (j ? "," : "") + std::to_string(c[j]);
    return s + ")";
  }

  /// Simple graph with edges (x, x+e_j), ordered by x then axis.
  MultiGraph graph() const {
    std::vector<std::string> names;
    for (std::size_t x = 0; x < size_; ++x) names.push_back(name(x));
    std::vector<Edge> edges;
    for (std::size_t x = 0; x < size_; ++x)
      for (std::size_t j = 0; j < dims_.size(); ++j) edges.push_back({x, neighbor(x, j, +1)});
    return MultiGraph(std::move(names), std::move(edges));
  }
  EdgeIndex edge_id(std::size_t x, std::size_t axis) const { return x * dims_.size() + axis; }

 private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 0;
};

struct LatticeWalk {
  Torus torus;
  std::vector<Mat> coins;  // C′(x), 2d × 2d, one per vertex
  IndexedBasis basis;
  SpMat shift;             // Ŝ_V
  SpMat coin;              // ⊕_x C′(x)
  WalkOperator u;          // Û_V = Ŝ_V Ĉ_V

  std::size_t components() const { return 2 * torus.dim(); }
  std::size_t state(std::size_t x, std::size_t comp) const { return x * components() + comp; }

  /// Σ_j (P̂_j τ_{+j} + Q̂_j τ_{−j}) with P̂_j, Q̂_j the rows of C′ for ±j:
  /// the same operator written as a random-walk-style sum.
  SpMat random_walk_form() const {
    const std::size_t d = torus.dim(), k = components();
    std::vector<Triplet> t;
    for (std::size_t x = 0; x < torus.num_vertices(); ++x)
      for (std::size_t j = 0; j < d; ++j)
        for (int s = 0; s < 2; ++s) {
          const std::size_t comp = 2 * j + static_cast<std::size_t>(s);
          // Component −j at x is fed from x + e_j, component +j from x − e_j.
          const std::size_t src = torus.neighbor(x, j, s == 0 ? +1 : -1);
          for (std::size_t c = 0; c < k; ++c) {
            const cplx v = coins[src](static_cast<Eigen::Index>(comp), static_cast<Eigen::Index>(c));
            if (v != cplx(0.0)) t.emplace_back(state(x, comp), state(src, c), v);
          }
        }
    const auto n = static_cast<Eigen::Index>(basis.size());
    SpMat m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }
};

inline std::string component_name(std::size_t comp) {
  return (comp % 2 ? "+" : "-") + std::to_string(comp / 2 + 1);
}

inline LatticeWalk build_lattice(Torus torus, std::vector<Mat> coins) {
  LatticeWalk w;
  w.torus = std::move(torus);
  const std::size_t d = w.torus.dim(), k = 2 * d, nv = w.torus.num_vertices();
  if (coins.size() == 1) coins.assign(nv, coins.front());
  if (coins.size() != nv) throw Error("expected one coin per torus vertex (or a single shared coin)");
  for (std::size_t x = 0; x < nv; ++x) {
    if (static_cast<std::size_t>(coins[x].rows()) != k || static_cast<std::size_t>(coins[x].cols()) != k)
      throw Error("lattice coin must be 2d × 2d", w.torus.name(x));
    if (unitarity_defect(coins[x]) > tol::construction) throw Error("lattice coin is not unitary", w.torus.name(x));
  }
  w.coins = std::move(coins);
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < nv; ++x)
    for (std::size_t c = 0; c < k; ++c) labels.push_back(w.torus.name(x) + ";" + component_name(c));
  w.basis = IndexedBasis(std::move(labels));

  const auto n = static_cast<Eigen::Index>(nv * k);
  std::vector<Triplet> st, ct;
  for (std::size_t x = 0; x < nv; ++x) {
    for (std::size_t j = 0; j < d; ++j) {
      // (Ŝψ)_{−j}(x) = ψ_{−j}(x+e_j), (Ŝψ)_{+j}(x) = ψ_{+j}(x−e_j).
      st.emplace_back(w.state(x, 2 * j), w.state(w.torus.neighbor(x, j, +1), 2 * j), 1.0);
      st.emplace_back(w.state(x, 2 * j + 1), w.state(w.torus.neighbor(x, j, -1), 2 * j + 1), 1.0);
    }
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const cplx v = w.coins[x](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v != cplx(0.0)) ct.emplace_back(w.state(x, a), w.state(x, b), v);
      }
  }
  w.shift = SpMat(n, n);
  w.shift.setFromTriplets(st.begin(), st.end());
  w.coin = SpMat(n, n);
  w.coin.setFromTriplets(ct.begin(), ct.end());
  w.u = WalkOperator::make(w.basis, SpMat(w.shift * w.coin), "lattice");
  return w;
}

/// Grover coin on 2d components.
inline LatticeWalk build_lattice_grover(Torus torus) {
  const std::size_t k = 2 * torus.dim();
  return build_lattice(std::move(torus), {grover_block(k)});
}

}  // namespace qwalk
