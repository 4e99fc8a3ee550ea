#include <gtest/gtest.h>

#include <cstdlib>

#include "support.hpp"

namespace qwalk {
namespace {

Mat pauli_x() {
  Mat x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

TEST(BlockDirectSum, SparsityFollowsTheClasses) {
  auto p = Partition::from_classes(3, {{0}, {1, 2}});
  Mat one(1, 1);
  one << cplx(0.0, 1.0);
  auto e = block_direct_sum(p, {one, pauli_x()});
  const Mat d(e.matrix);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!p.same_class(i, j)) {
        EXPECT_EQ(d(i, j), cplx(0.0));
      }
  EXPECT_EQ(d(0, 0), cplx(0.0, 1.0));
  EXPECT_EQ(d(1, 2), cplx(1.0));
  EXPECT_TRUE(is_local(e.matrix, p, 0.0));
}

TEST(BlockDirectSum, BlockOrderFollowsClassElementOrder) {
  auto p = Partition::from_classes(3, {{2, 0}, {1}});
  Mat b(2, 2);
  b << 0.0, 1.0, cplx(0.0, 1.0), 0.0;
  auto e = block_direct_sum(p, {b, Mat::Identity(1, 1)});
  // Row "2" is the first row of the block, column "0" its second column.
  EXPECT_EQ(Mat(e.matrix)(2, 0), cplx(1.0));
  EXPECT_EQ(Mat(e.matrix)(0, 2), cplx(0.0, 1.0));
}

TEST(BlockDirectSum, RejectsWrongCountsShapesAndNonUnitaryBlocks) {
  auto p = Partition::from_classes(3, {{0}, {1, 2}});
  EXPECT_THROW(block_direct_sum(p, {Mat::Identity(1, 1)}), Error);
  EXPECT_THROW(block_direct_sum(p, {Mat::Identity(2, 2), Mat::Identity(1, 1)}), Error);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = 0.1;
  try {
    block_direct_sum(p, {Mat::Identity(1, 1), bad});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.where(), "class 1");
  }
}

TEST(Reflection, FixesAlphaAndSquaresToIdentity) {
  Rng rng(3);
  for (int k = 1; k <= 6; ++k) {
    Vec a = testing::random_unit(rng, static_cast<std::size_t>(k));
    Mat r = reflection(a);
    EXPECT_LT(max_abs(r * a - a), 1e-14);
    EXPECT_LT(max_abs(r * r - Mat::Identity(k, k)), 1e-14);
    EXPECT_LT(hermiticity_defect(r), 1e-15);
  }
  EXPECT_LT(max_abs(reflection(Vec::Zero(3)) + Mat::Identity(3, 3)), 0.0 + 1e-300);
  EXPECT_THROW(reflection(Vec::Constant(2, 1.0)), Error);
}

TEST(Reflection, GroverBlockEntries) {
  EXPECT_EQ(grover_block(1)(0, 0), cplx(1.0));
  const Mat g = grover_block(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(g(i, j) - (0.5 - (i == j ? 1.0 : 0.0))), 0.0, 1e-15);
}

TEST(HermitianExp, PauliRotation) {
  const double t = 0.7;
  Mat want = std::cos(t) * Mat::Identity(2, 2) + cplx(0.0, std::sin(t)) * pauli_x();
  EXPECT_LT(max_abs(hermitian_exp(pauli_x(), t) - want), 1e-15);
  Mat nh = pauli_x();
  nh(0, 1) = 2.0;
  EXPECT_THROW(hermitian_exp(nh, t), Error);
}

TEST(HermitianExp, RandomHermitianGivesUnitary) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Mat h = random_hermitian(testing::uniform_int(rng, 1, 7), rng);
    Mat u = hermitian_exp(h, 1.3);
    EXPECT_LT(unitarity_defect(u), 1e-12);
    EXPECT_LT(max_abs(u * hermitian_exp(h, -1.3) - Mat::Identity(u.rows(), u.cols())), 1e-12);
  }
}

TEST(WalkOperator, RejectsNonUnitaryAndShapeMismatch) {
  IndexedBasis b({"a", "b"});
  SpMat m = to_sparse(Mat::Identity(2, 2) * 2.0);
  EXPECT_THROW(WalkOperator::make(b, m, "test"), Error);
  EXPECT_THROW(WalkOperator::make(b, sparse_identity(3), "test"), Error);
  EXPECT_NO_THROW(WalkOperator::make(b, sparse_identity(2), "test"));
  EXPECT_THROW(IndexedBasis({"a", "a"}), Error);
}

TEST(IsLocal, ProductOfTwoLocalFactorsIsLocalToNeither) {
  Rng rng(4);
  auto pp = PartitionPair::make({"a", "b", "c"}, Partition::from_classes(3, {{0}, {1, 2}}),
                                Partition::from_classes(3, {{0, 1}, {2}}));
  auto w = build_two_partition(pp, testing::random_blocks(rng, pp.pi1), testing::random_blocks(rng, pp.pi2));
  EXPECT_TRUE(is_local(w.e_op.matrix, pp.pi1, 1e-10));
  EXPECT_TRUE(is_local(w.f_op.matrix, pp.pi2, 1e-10));
  EXPECT_FALSE(is_local(w.f_op.matrix, pp.pi1, 1e-10));
  EXPECT_FALSE(is_local(w.u, pp.pi1, 1e-10));
  EXPECT_TRUE(is_unitary(w.u));
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
  Rng a(42), b(42);
  for (std::size_t k = 1; k < 10; ++k) {
    Mat u = random_unitary(k, a);
    EXPECT_LT(unitarity_defect(u), 1e-13);
    EXPECT_EQ(u, random_unitary(k, b));
  }
}

TEST(Seed, ReadsEnvironment) {
  ::setenv("QWALK_SEED", "123", 1);
  EXPECT_EQ(seed_from_env(), 123u);
  ::setenv("QWALK_SEED", "abc", 1);
  EXPECT_THROW(seed_from_env(), Error);
  ::unsetenv("QWALK_SEED");
  EXPECT_EQ(seed_from_env(), 0u);
}

TEST(EigUnitary, EigenpairsOfRandomUnitaries) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = testing::uniform_int(rng, 1, 12);
    Mat u = random_unitary(k, rng);
    auto eig = eig_unitary(u);
    ASSERT_EQ(eig.size(), k);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_LT((u * eig[i].vector - eig[i].value * eig[i].vector).norm(), 1e-12);
      EXPECT_NEAR(std::abs(eig[i].value), 1.0, 1e-12);
      if (i) {
        EXPECT_LE(eig[i - 1].phase, eig[i].phase);
      }
    }
    EXPECT_LT(phase_multiset_distance([&] {
                std::vector<double> p;
                for (auto& e : eig) p.push_back(e.phase);
                return p;
              }(), testing::oracle_phases(u)),
              1e-10);
  }
  EXPECT_THROW(eig_unitary(Mat::Identity(5, 5), 4), Error);
}

TEST(EigUnitary, PrincipalPhaseOfMinusOneIsPi) {
  EXPECT_DOUBLE_EQ(principal_phase(cplx(-1.0, -0.0)), pi);
  EXPECT_DOUBLE_EQ(principal_phase(cplx(-1.0, 1e-17)), pi);
}

TEST(PhaseMultisetDistance, WrapsAroundTheCircle) {
  EXPECT_LT(phase_multiset_distance({pi - 1e-12, 0.5}, {-pi + 1e-12, 0.5}), 1e-11);
  EXPECT_NEAR(phase_multiset_distance({0.0, 1.0}, {0.0, 1.5}), 0.5, 1e-15);
  EXPECT_TRUE(std::isinf(phase_multiset_distance({0.0}, {0.0, 1.0})));
}

TEST(NullSpace, DimensionAndOrthonormality) {
  Mat m(2, 4);
  m << 1, 0, 0, 0, 0, 1, 1, 0;
  Mat n = null_space(m);
  ASSERT_EQ(n.cols(), 2);
  EXPECT_LT(max_abs(m * n), 1e-14);
  EXPECT_LT(max_abs(n.adjoint() * n - Mat::Identity(2, 2)), 1e-14);
}

TEST(GramSchmidt, DropsDependentColumns) {
  Mat c(3, 3);
  c << 1, 2, 0, 0, 0, 1, 0, 0, 0;
  Mat q = gram_schmidt(c);
  EXPECT_EQ(q.cols(), 2);
  EXPECT_LT(max_abs(q.adjoint() * q - Mat::Identity(2, 2)), 1e-15);
}

TEST(FixPhase, LargestEntryBecomesRealPositive) {
  Vec v(3);
  v << cplx(0.1, 0.0), cplx(0.0, -0.9), cplx(0.3, 0.3);
  fix_phase(v);
  EXPECT_NEAR(v(1).imag(), 0.0, 1e-16);
  EXPECT_GT(v(1).real(), 0.0);
}

TEST(StateVector, DeltaUniformAndValidation) {
  IndexedBasis b({"x", "y", "z", "w"});
  auto u = StateVector::uniform(b);
  EXPECT_NEAR(u.probabilities().sum(), 1.0, 1e-15);
  auto d = StateVector::delta(b, 2);
  EXPECT_EQ(d.probabilities()(2), 1.0);
  EXPECT_THROW(StateVector::make(b, Vec::Zero(3)), Error);
  EXPECT_THROW(b.index("q"), Error);
}

}  // namespace
}  // namespace qwalk
