#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "cstar/cstar.hpp"

using namespace cstar;

namespace {

ComplexMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix diag(std::initializer_list<Complex> v) {
  ComplexVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex z : v) d(i++) = z;
  return d.asDiagonal();
}

StarAlgebra d2() { return generate_algebra(2, {diag({1, 2})}); }

// independent commutant dimension: rank of the stacked commutation operators
std::size_t oracle_commutant_dim(const StarAlgebra& alg) {
  const Eigen::Index n = alg.ambient_dim();
  ComplexMatrix stacked(static_cast<Eigen::Index>(alg.dim()) * n * n, n * n);
  const ComplexMatrix id = identity(n);
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    const ComplexMatrix& b = alg.basis(i);
    stacked.middleRows(static_cast<Eigen::Index>(i) * n * n, n * n) =
        Eigen::kroneckerProduct(id, b) - Eigen::kroneckerProduct(b.transpose(), id);
  }
  Eigen::FullPivLU<ComplexMatrix> lu(stacked);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(n * n - lu.rank());
}

}  // namespace

TEST(Generate, ShiftGeneratesM2) {
  const StarAlgebra alg = generate_algebra(2, {unit(2, 0, 1)});
  EXPECT_EQ(alg.dim(), 4u);
  for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
    EXPECT_TRUE(contains(alg, unit(2, i, j)).member);
  }
}

TEST(Generate, EmptyGivesScalars) {
  const StarAlgebra alg = generate_algebra(3, {});
  EXPECT_EQ(alg.dim(), 1u);
  EXPECT_TRUE(contains(alg, 5.0 * identity(3)).member);
  EXPECT_FALSE(contains(alg, unit(3, 0, 0)).member);
}

TEST(Generate, DistinctDiagonalGivesD2) {
  const StarAlgebra alg = d2();
  EXPECT_EQ(alg.dim(), 2u);
  EXPECT_TRUE(contains(alg, unit(2, 0, 0)).member);
  EXPECT_FALSE(contains(alg, unit(2, 0, 1)).member);
}

TEST(Generate, OrthonormalBasis) {
  const StarAlgebra alg = generate_algebra(4, {unit(4, 0, 1), diag({1, 1, 2, 3})});
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    for (std::size_t j = 0; j < alg.dim(); ++j) {
      const Complex ip = (alg.basis(i).adjoint() * alg.basis(j)).trace();
      EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
  EXPECT_LE(alg.structure_residual(), 1e-9);
}

TEST(Generate, DimensionMismatchNamesGenerator) {
  try {
    generate_algebra(2, {identity(2), identity(3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("generator 1"), std::string::npos);
  }
}

TEST(Generate, IdempotentGeneration) {
  const StarAlgebra a = generate_algebra(4, {unit(4, 0, 1), diag({1, 1, 0, 2})});
  const StarAlgebra b = generate_algebra(4, a.basis());
  EXPECT_EQ(a.dim(), b.dim());
  EXPECT_LE(span_equality_residual(a, b), 1e-9);
}

TEST(Generate, ClosedUnderProducts) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const StarAlgebra amb = block_algebra({4});
    const ComplexMatrix g = random_element(amb, Seed{s}) * unit(4, 0, 0);
    const StarAlgebra alg = generate_algebra(4, {g, unit(4, 3, 3)});
    for (std::size_t i = 0; i < alg.dim(); ++i) {
      for (std::size_t j = 0; j < alg.dim(); ++j) {
        EXPECT_TRUE(contains(alg, alg.basis(i) * alg.basis(j)).member);
      }
    }
  }
}

TEST(Commutant, Examples) {
  EXPECT_EQ(commutant(block_algebra({2})).dim(), 1u);
  EXPECT_EQ(commutant(generate_algebra(2, {})).dim(), 4u);
  const StarAlgebra c = commutant(d2());
  EXPECT_EQ(c.dim(), 2u);
  EXPECT_LE(span_equality_residual(c, d2()), 1e-9);
}

TEST(Commutant, MatchesRankOracle) {
  const std::vector<StarAlgebra> algs{block_algebra({2, 3}), block_algebra({1, 1, 2}),
                                      generate_algebra(3, {unit(3, 0, 1)}), d2()};
  for (const StarAlgebra& alg : algs) {
    EXPECT_EQ(commutant(alg).dim(), oracle_commutant_dim(alg));
  }
}

TEST(Commutant, OrderReversing) {
  // B subset A implies A' subset B'
  const StarAlgebra big = block_algebra({2, 2});
  const StarAlgebra small = generate_algebra(4, {diag({1, 1, 0, 0})});
  EXPECT_LE(containment_residual(small, big), 1e-9);
  EXPECT_LE(containment_residual(commutant(big), commutant(small)), 1e-9);
}

TEST(Bicommutant, EqualsAlgebra) {
  for (const StarAlgebra& alg : {d2(), block_algebra({2}), block_algebra({1, 2}),
                                 generate_algebra(4, {unit(4, 0, 1), diag({0, 0, 1, 2})})}) {
    const StarAlgebra bc = bicommutant(alg);
    EXPECT_EQ(bc.dim(), alg.dim());
    EXPECT_LE(containment_residual(alg, bc), 1e-9);
    EXPECT_LE(containment_residual(bc, alg), 1e-9);
  }
}

TEST(Center, Examples) {
  EXPECT_EQ(center(block_algebra({2})).dim(), 1u);
  const StarAlgebra z = center(block_algebra({2, 3}));
  EXPECT_EQ(z.dim(), 2u);
  EXPECT_TRUE(contains(z, diag({1, 1, 0, 0, 0})).member);
  EXPECT_TRUE(contains(z, diag({0, 0, 1, 1, 1})).member);
  EXPECT_LE(span_equality_residual(center(d2()), d2()), 1e-9);
}

TEST(CentralProjections, Examples) {
  const CentralProjectionSet m2 = central_projections(block_algebra({2}));
  ASSERT_EQ(m2.count(), 1u);
  EXPECT_LE((m2.minimal[0] - identity(2)).norm(), 1e-9);

  const CentralProjectionSet m23 = central_projections(block_algebra({2, 3}));
  ASSERT_EQ(m23.count(), 2u);
  EXPECT_LE((m23.minimal[0] - diag({1, 1, 0, 0, 0})).norm(), 1e-9);
  EXPECT_LE((m23.minimal[1] - diag({0, 0, 1, 1, 1})).norm(), 1e-9);

  const CentralProjectionSet d3 = central_projections(block_algebra({1, 1, 1}));
  ASSERT_EQ(d3.count(), 3u);
  for (Eigen::Index m = 0; m < 3; ++m) EXPECT_LE((d3.minimal[m] - unit(3, m, m)).norm(), 1e-9);
}

TEST(CentralProjections, LatticeAndPartition) {
  const StarAlgebra alg = block_algebra({1, 2, 1});
  const CentralProjectionSet cps = central_projections(alg);
  const std::vector<ComplexMatrix> lattice = projection_lattice(cps, 4);
  EXPECT_EQ(lattice.size(), 8u);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const ComplexMatrix& q : cps.minimal) {
    sum += q;
    EXPECT_LE(projection_residual(q), 1e-9);
    EXPECT_TRUE(contains(center(alg), q).member);
  }
  EXPECT_LE((sum - identity(4)).norm(), 1e-9);
  EXPECT_LE((projection_from_selector(cps, 4, {0, 2}) - diag({1, 0, 0, 1})).norm(), 1e-9);
  EXPECT_LE((projection_from_selector(cps, 4, {1}) - diag({0, 1, 1, 0})).norm(), 1e-9);
}

TEST(Contains, Examples) {
  const Membership in = contains(d2(), diag({1, 5}));
  EXPECT_TRUE(in.member);
  EXPECT_LE(in.residual, 1e-12);
  const Membership out = contains(d2(), unit(2, 0, 1));
  EXPECT_FALSE(out.member);
  EXPECT_NEAR(out.residual, 1.0, 1e-12);
}

TEST(Contains, DimensionMismatch) {
  EXPECT_THROW(contains(d2(), identity(3)), Error);
}

TEST(RandomElements, ScalarAlgebra) {
  const StarAlgebra scalars = generate_algebra(3, {});
  const ComplexMatrix h = random_hermitian(scalars, Seed{9});
  EXPECT_LE((h - h(0, 0) * identity(3)).norm(), 1e-12);
  EXPECT_LE(std::abs(h(0, 0).imag()), 1e-12);
  const ComplexMatrix u = random_unitary_in(scalars, Seed{9});
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
  EXPECT_LE((u - u(0, 0) * identity(3)).norm(), 1e-12);
  const ComplexMatrix a = random_invertible_in(scalars, Seed{9});
  EXPECT_GT(std::abs(a(0, 0)), 0.0);
}

TEST(RandomElements, DiagonalUnitary) {
  const ComplexMatrix u = random_unitary_in(d2(), Seed{3});
  EXPECT_LE(std::abs(u(0, 1)) + std::abs(u(1, 0)), 1e-12);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(1, 1)), 1.0, 1e-12);
}

TEST(RandomElements, PredicatesAndDeterminism) {
  const StarAlgebra alg = block_algebra({2, 3});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix h = random_hermitian(alg, Seed{s});
    EXPECT_TRUE(contains(alg, h).member);
    EXPECT_LE(hermitian_residual(h), 1e-12);
    const ComplexMatrix u = random_unitary_in(alg, Seed{s});
    EXPECT_LE(unitarity_residual(u), 1e-9);
    EXPECT_LE(contains(alg, u).residual, 1e-9);
    const ComplexMatrix a = random_invertible_in(alg, Seed{s});
    EXPECT_NO_THROW(polar_decompose(a));
    EXPECT_TRUE(random_element(alg, Seed{s}) == random_element(alg, Seed{s}));
    EXPECT_TRUE(random_invertible_in(alg, Seed{s}) == a);
  }
}
