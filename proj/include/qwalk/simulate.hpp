#pragma once

// Time evolution and search traces.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qwalk/operators.hpp"

namespace qwalk {

struct EvolutionRun {
  WalkOperator walk;
  StateVector initial;
  std::size_t steps = 0;
  std::vector<RealVec> mu;        // μ_n, n = 0..steps
  std::optional<Partition> classes;
  std::vector<RealVec> class_mu;  // μ_n(C_j) when `classes` is set
  std::vector<double> norms;      // ‖ψ_n‖
  Vec final_state;
};

inline RealVec aggregate(const RealVec& mu, const Partition& p) {
  RealVec out = RealVec::Zero(static_cast<Eigen::Index>(p.num_classes()));
  for (std::size_t w = 0; w < p.ground_size(); ++w)
    out(static_cast<Eigen::Index>(p.class_of(w))) += mu(static_cast<Eigen::Index>(w));
  return out;
}

inline EvolutionRun evolve(const WalkOperator& walk, const StateVector& psi0, std::size_t n,
                           std::optional<Partition> classes = std::nullopt) {
  if (!(psi0.basis == walk.basis)) throw Error("initial state and walk use different bases", walk.provenance);
  if (std::abs(psi0.amplitudes.norm() - 1.0) > tol::construction)
    throw Error("initial state is not normalized (norm " + std::to_string(psi0.amplitudes.norm()) + ")");
  if (classes && classes->ground_size() != walk.dimension())
    throw Error("class partition does not cover the walk basis");
  EvolutionRun run{walk, psi0, n, {}, std::move(classes), {}, {}, {}};
  Vec psi = psi0.amplitudes;
  auto record = [&] {
    RealVec mu = psi.cwiseAbs2();
    if (run.classes) run.class_mu.push_back(aggregate(mu, *run.classes));
    run.norms.push_back(psi.norm());
    run.mu.push_back(std::move(mu));
  };
  record();
  for (std::size_t k = 0; k < n; ++k) {
    psi = walk.matrix * psi;
    record();
  }
  run.final_state = std::move(psi);
  return run;
}

struct SearchTrace {
  EvolutionRun run;
  std::vector<std::size_t> target;
  std::vector<double> success;  // length steps + 1
  std::size_t argmax = 0;
  double peak = 0.0;
};

/// Success probability Σ_{ω∈target} μ_n(ω) along an evolution.
inline SearchTrace search_trace(const WalkOperator& walk, const StateVector& psi0,
                                std::vector<std::size_t> target, std::size_t n,
                                std::optional<Partition> classes = std::nullopt) {
  if (target.empty()) throw Error("search target is empty");
  for (auto t : target)
    if (t >= walk.dimension()) throw Error("search target index out of range", std::to_string(t));
  SearchTrace tr{evolve(walk, psi0, n, std::move(classes)), std::move(target), {}, 0, 0.0};
  for (std::size_t k = 0; k < tr.run.mu.size(); ++k) {
    double s = 0.0;
    for (auto t : tr.target) s += tr.run.mu[k](static_cast<Eigen::Index>(t));
    s = std::clamp(s, 0.0, 1.0);
    tr.success.push_back(s);
    if (s > tr.peak) {
      tr.peak = s;
      tr.argmax = k;
    }
  }
  return tr;
}

/// Trace for an empty marked set: nothing to find, success stays 0.
inline SearchTrace unmarked_trace(const WalkOperator& walk, const StateVector& psi0, std::size_t n,
                                  std::optional<Partition> classes = std::nullopt) {
  SearchTrace tr{evolve(walk, psi0, n, std::move(classes)), {}, {}, 0, 0.0};
  tr.success.assign(n + 1, 0.0);
  return tr;
}

}  // namespace qwalk
