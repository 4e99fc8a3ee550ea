#pragma once

// Random instance generators and brute-force oracles shared by the test
// binaries. Oracles are written straight from the definitions, without
// going through the library's block machinery.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qwalk/qwalk.hpp"

namespace qwalk::testing {

inline std::string data_path(const std::string& name) { return std::string(QWALK_DATA_DIR) + "/" + name; }

// ---------------------------------------------------------------------------
// Generators

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Connected multigraph: a random spanning tree plus `extra` random edges
/// (parallel edges allowed, no loops).
inline MultiGraph random_multigraph(Rng& rng, std::size_t n, std::size_t extra) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.push_back({uniform_int(rng, 0, v - 1), v});
  for (std::size_t k = 0; k < extra; ++k) {
    auto a = uniform_int(rng, 0, n - 1), b = uniform_int(rng, 0, n - 2);
    if (b >= a) ++b;
    edges.push_back({a, b});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  for (auto& e : edges)
    if (uniform_int(rng, 0, 1)) std::swap(e.u, e.v);
  return MultiGraph::numbered(n, std::move(edges));
}

inline MultiGraph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  return MultiGraph::numbered(n, std::move(edges));
}

inline MultiGraph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.push_back({a, b});
  return MultiGraph::numbered(n, std::move(edges));
}

/// The three-vertex multigraph with a double edge used for sink examples.
inline MultiGraph sink_multigraph() {
  return MultiGraph::from_names({"1", "2", "3"}, {{"1", "2"}, {"1", "2"}, {"2", "3"}, {"3", "1"}});
}

inline Partition random_partition(Rng& rng, std::size_t n, std::size_t max_classes) {
  const std::size_t k = uniform_int(rng, 1, std::min(n, max_classes));
  std::vector<std::size_t> keys(n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < n; ++i) keys[perm[i]] = i < k ? i : uniform_int(rng, 0, k - 1);
  // Shuffle element order inside classes so positions are not sorted.
  auto p = Partition::from_keys<std::size_t>(keys);
  auto classes = p.classes();
  for (auto& c : classes) std::shuffle(c.begin(), c.end(), rng);
  return Partition::from_classes(n, classes);
}

inline PartitionPair random_partition_pair(Rng& rng, std::size_t n, bool connected) {
  for (;;) {
    auto p1 = random_partition(rng, n, std::max<std::size_t>(1, n / 2));
    auto p2 = random_partition(rng, n, std::max<std::size_t>(1, n / 2));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
    auto pp = PartitionPair::make(labels, p1, p2);
    if (!connected || intersection_graph(pp).graph.is_connected()) return pp;
  }
}

inline std::vector<Mat> random_blocks(Rng& rng, const Partition& p) {
  std::vector<Mat> out;
  for (const auto& c : p.classes()) out.push_back(random_unitary(c.size(), rng));
  return out;
}

inline TwoPartitionWalk random_two_partition(Rng& rng, std::size_t n, bool connected) {
  auto pp = random_partition_pair(rng, n, connected);
  auto e = random_blocks(rng, pp.pi1);
  auto f = random_blocks(rng, pp.pi2);
  return build_two_partition(std::move(pp), std::move(e), std::move(f));
}

/// Random unit vector with all entries nonzero.
inline Vec random_unit(Rng& rng, std::size_t k) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(k));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v / v.norm();
}

/// Random probability weights on E₂ (stochastic at every X vertex).
inline std::vector<double> random_transition(Rng& rng, const DuplicatedGraph& d) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> p(d.graph.num_edges());
  std::vector<double> sums(d.graph.num_x(), 0.0);
  for (EdgeIndex e = 0; e < p.size(); ++e) {
    p[e] = u(rng);
    sums[d.graph.x_end(e)] += p[e];
  }
  for (EdgeIndex e = 0; e < p.size(); ++e) p[e] /= sums[d.graph.x_end(e)];
  return p;
}

// ---------------------------------------------------------------------------
// Oracles

/// Grover walk with flip-flop shift from the entrywise formula
/// U[b, a] = (2/deg(t(a)) − δ_{b̄,a}) whenever o(b) = t(a).
inline Mat grover_oracle(const MultiGraph& g) {
  const std::size_t na = 2 * g.num_edges();
  auto origin = [&](std::size_t a) { return a % 2 == 0 ? g.edge(a / 2).u : g.edge(a / 2).v; };
  auto terminus = [&](std::size_t a) { return a % 2 == 0 ? g.edge(a / 2).v : g.edge(a / 2).u; };
  Mat u = Mat::Zero(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < na; ++b)
      if (origin(b) == terminus(a))
        u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) =
            2.0 / static_cast<double>(g.degree(terminus(a))) - ((b ^ 1u) == a ? 1.0 : 0.0);
  return u;
}

/// Normalized adjacency D^{-1/2} A D^{-1/2}: the discriminant of a Grover walk.
inline Eigen::MatrixXd normalized_adjacency(const MultiGraph& g) {
  Eigen::MatrixXd a = g.adjacency();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      a(i, j) /= std::sqrt(static_cast<double>(g.degree(static_cast<std::size_t>(i)) * g.degree(static_cast<std::size_t>(j))));
  return a;
}

/// Dense phases of a unitary via the general (non-Hermitian) eigensolver.
inline std::vector<double> oracle_phases(const Mat& u) {
  Eigen::ComplexEigenSolver<Mat> es(u, false);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(std::arg(es.eigenvalues()(k)));
  std::sort(out.begin(), out.end());
  return out;
}

/// dim ker(λ − U) by singular values.
inline std::size_t kernel_dimension(const Mat& u, cplx lambda, double tol = 1e-8) {
  Eigen::JacobiSVD<Mat> svd(lambda * Mat::Identity(u.rows(), u.cols()) - u);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) k += svd.singularValues()(i) <= tol;
  return k;
}

/// P with P[η(k), k] = 1, dense.
inline Mat permutation_matrix(const std::vector<std::size_t>& eta, std::size_t target) {
  Mat p = Mat::Zero(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(eta.size()));
  for (std::size_t k = 0; k < eta.size(); ++k) p(static_cast<Eigen::Index>(eta[k]), static_cast<Eigen::Index>(k)) = 1.0;
  return p;
}

inline bool is_permutation_matrix(const Mat& m, double tol = 0.0) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int ones = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx v = m(i, j);
      if (std::abs(v - 1.0) <= tol) ++ones;
      else if (std::abs(v) > tol) return false;
    }
    if (ones != 1) return false;
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    int ones = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) ones += std::abs(m(i, j) - 1.0) <= tol;
    if (ones != 1) return false;
  }
  return true;
}

}  // namespace qwalk::testing
