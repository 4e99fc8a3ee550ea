#pragma once

#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/operators.hpp"

namespace qwalk {

/// (Ω; π₁, π₂; Û) with Û = F̂Ê, Ê local w.r.t. π₁ and F̂ local w.r.t. π₂.
struct TwoPartitionWalk {
  PartitionPair omega;
  BlockLocalUnitary e_op;
  BlockLocalUnitary f_op;
  WalkOperator u;

  IndexedBasis basis() const { return u.basis; }
};

inline TwoPartitionWalk build_two_partition(PartitionPair omega, std::vector<Mat> blocks_e,
                                            std::vector<Mat> blocks_f,
                                            std::string provenance = "two_partition") {
  auto e_op = block_direct_sum(omega.pi1, std::move(blocks_e));
  auto f_op = block_direct_sum(omega.pi2, std::move(blocks_f));
  SpMat u = f_op.matrix * e_op.matrix;
  IndexedBasis basis(omega.omega);
  auto w = WalkOperator::make(std::move(basis), std::move(u), std::move(provenance));
  return TwoPartitionWalk{std::move(omega), std::move(e_op), std::move(f_op), std::move(w)};
}

/// Blocks of a local unitary carried to another basis through a bijection.
/// `source_of_target[t]` is the source index relabeled to target index t.
/// Each target class must be the image of exactly one source class; the
/// result is the block list of 𝒰 Ê 𝒰⁻¹ in target class order.
inline std::vector<Mat> relabel_blocks(const BlockLocalUnitary& src, const Partition& target,
                                       const std::vector<std::size_t>& source_of_target) {
  std::vector<Mat> out;
  for (std::size_t c = 0; c < target.num_classes(); ++c) {
    const auto& members = target.members(c);
    const std::size_t src_class = src.partition.class_of(source_of_target.at(members.front()));
    if (src.partition.members(src_class).size() != members.size())
      throw Error("relabel_blocks: class sizes differ", "class " + std::to_string(c));
    const auto k = static_cast<Eigen::Index>(members.size());
    Mat b(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto si = source_of_target[members[static_cast<std::size_t>(i)]];
      if (src.partition.class_of(si) != src_class)
        throw Error("relabel_blocks: target class is not the image of one source class",
                    "class " + std::to_string(c));
      for (Eigen::Index j = 0; j < k; ++j) {
        const auto sj = source_of_target[members[static_cast<std::size_t>(j)]];
        b(i, j) = src.blocks[src_class](static_cast<Eigen::Index>(src.partition.position(si)),
                                        static_cast<Eigen::Index>(src.partition.position(sj)));
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace qwalk
