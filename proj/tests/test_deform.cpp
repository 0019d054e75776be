#include <gtest/gtest.h>

#include "cstar/cstar.hpp"

using namespace cstar;

namespace {

const Complex I1{0.0, 1.0};

ComplexMatrix diag(std::initializer_list<Complex> v) {
  ComplexVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex z : v) d(i++) = z;
  return d.asDiagonal();
}

ComplexMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

StarAlgebra d2() { return block_algebra({1, 1}); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST(DeformedProduct, IdentityAndOpposite) {
  const StarAlgebra m2 = block_algebra({2});
  const DeformedAlgebra same(m2, identity(2), identity(2));
  const DeformedAlgebra opposite(m2, identity(2), ComplexMatrix::Zero(2, 2));
  const ComplexMatrix a = unit(2, 0, 1), b = unit(2, 1, 0);
  EXPECT_EQ(deformed_mul(same, a, b), a * b);
  EXPECT_EQ(deformed_mul(opposite, a, b), b * a);
}

TEST(DeformedProduct, DiagonalArithmetic) {
  const DeformedAlgebra d(d2(), diag({I1, 1}), identity(2));
  const ComplexMatrix r = deformed_mul(d, diag({2, 0}), diag({1, 3}));
  EXPECT_LE((r - diag({2.0 * I1, 0})).norm(), 1e-15);
}

TEST(DeformedProduct, RejectsNonMember) {
  const DeformedAlgebra d(d2(), identity(2), identity(2));
  EXPECT_EQ(kind_of([&] { deformed_mul(d, unit(2, 0, 1), identity(2)); }), ErrorKind::NotMember);
}

TEST(DeformedStar, Examples) {
  const DeformedAlgebra plain(block_algebra({2}), identity(2), identity(2));
  const ComplexMatrix a = random_element(block_algebra({2}), Seed{1});
  EXPECT_EQ(deformed_star(plain, a), a.adjoint());

  const DeformedAlgebra d(d2(), diag({I1, 1}), identity(2));
  EXPECT_LE((deformed_star(d, diag({2, 3})) - diag({-2, 3})).norm(), 1e-15);
}

TEST(DeformedStar, Involutive) {
  const StarAlgebra alg = block_algebra({2, 3});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DeformedAlgebra d(alg, random_unitary_in(alg, Seed{s}), identity(5));
    const ComplexMatrix a = random_element(alg, Seed{100 + s});
    EXPECT_LE(operator_norm(d.star(d.star(a)) - a), 1e-9 * std::max(1.0, operator_norm(a)));
  }
}

TEST(DeformedUnit, Examples) {
  EXPECT_EQ(deformed_unit(DeformedAlgebra(d2(), identity(2), identity(2))), identity(2));
  EXPECT_LE((deformed_unit(DeformedAlgebra(d2(), diag({I1, 1}), identity(2))) - diag({-I1, 1})).norm(), 1e-15);
}

TEST(DeformedUnit, TwoSidedOnRandomSamples) {
  const StarAlgebra alg = block_algebra({2, 3});
  const CentralProjectionSet cps = central_projections(alg);
  const DeformedAlgebra d(alg, random_unitary_in(alg, Seed{4}), cps.minimal[1]);
  for (std::uint64_t s = 0; s < 32; ++s) {
    const ComplexMatrix a = random_element(alg, Seed{200 + s});
    const double na = std::max(1.0, operator_norm(a));
    EXPECT_LE(operator_norm(d.product(d.unit(), a) - a), 1e-9 * na);
    EXPECT_LE(operator_norm(d.product(a, d.unit()) - a), 1e-9 * na);
  }
}

TEST(DeformedAlgebraInvariants, Diagnostics) {
  const StarAlgebra m2 = block_algebra({2});
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidDeformation);
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message([&] { DeformedAlgebra(m2, 2.0 * identity(2), identity(2)); }).find("u not unitary"), std::string::npos);
  EXPECT_NE(message([&] { DeformedAlgebra(d2(), ComplexMatrix(unit(2, 0, 1) + unit(2, 1, 0)), identity(2)); })
                .find("u not in algebra"),
            std::string::npos);
  EXPECT_NE(message([&] { DeformedAlgebra(m2, identity(2), 0.5 * identity(2)); }).find("p not a projection"),
            std::string::npos);
  EXPECT_NE(message([&] { DeformedAlgebra(m2, identity(2), unit(2, 0, 0)); }).find("p not central"),
            std::string::npos);
  EXPECT_NE(message([&] { DeformedAlgebra(d2(), identity(2), ComplexMatrix::Constant(2, 2, 0.5)); })
                .find("p not in algebra"),
            std::string::npos);
}

TEST(SelfAdjoint, Examples) {
  const StarAlgebra m2 = block_algebra({2});
  const ComplexMatrix h = random_hermitian(m2, Seed{5});
  EXPECT_TRUE(is_selfadjoint_deformed(DeformedAlgebra(m2, identity(2), identity(2)), h).holds);
  const DeformedAlgebra d(d2(), diag({-1, 1}), identity(2));
  EXPECT_FALSE(is_selfadjoint_deformed(d, diag({2.0 * I1, 3})).holds);
  // entrywise oracle: a_i u_i real for every i
  EXPECT_TRUE(is_selfadjoint_deformed(d, diag({-2, 3})).holds);
}

TEST(SelfAdjoint, StarTimesElement) {
  const StarAlgebra alg = block_algebra({1, 2});
  const CentralProjectionSet cps = central_projections(alg);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DeformedAlgebra d(alg, random_unitary_in(alg, Seed{s}), cps.minimal[s % 2]);
    const ComplexMatrix a = random_element(alg, Seed{300 + s});
    EXPECT_TRUE(is_selfadjoint_deformed(d, d.product(d.star(a), a)).holds);
  }
}

TEST(Positivity, Examples) {
  const StarAlgebra m2 = block_algebra({2});
  const DeformedAlgebra plain(m2, identity(2), identity(2));
  const ComplexMatrix b = random_element(m2, Seed{8});
  const ComplexMatrix a = b.adjoint() * b;
  const Positivity pos = is_positive_deformed(plain, a);
  ASSERT_TRUE(pos.positive);
  ASSERT_TRUE(pos.witness.has_value());
  EXPECT_LE((*pos.witness - sqrt_psd(a)).norm(), 1e-9 * a.norm());

  const DeformedAlgebra d(d2(), diag({-1, 1}), identity(2));
  EXPECT_TRUE(is_positive_deformed(d, diag({-2, 3})).positive);
  EXPECT_FALSE(is_positive_deformed(DeformedAlgebra(d2(), identity(2), identity(2)), diag({-1, 1})).positive);
}

TEST(Positivity, WitnessSquaresBack) {
  const StarAlgebra alg = block_algebra({2, 1});
  const CentralProjectionSet cps = central_projections(alg);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DeformedAlgebra d(alg, random_unitary_in(alg, Seed{s}), cps.minimal[0]);
    const ComplexMatrix c = random_element(alg, Seed{400 + s});
    const ComplexMatrix a = d.product(d.star(c), c);
    const Positivity pos = is_positive_deformed(d, a);
    ASSERT_TRUE(pos.positive);
    const ComplexMatrix& w = *pos.witness;
    EXPECT_LE(operator_norm(d.product(d.star(w), w) - a), 1e-8 * std::max(1.0, operator_norm(a)));
  }
}

TEST(Positivizer, Examples) {
  EXPECT_LE((positivizing_unitary(d2(), diag({-2, 3})) - diag({-1, 1})).norm(), 1e-12);
  ComplexMatrix rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_LE((positivizing_unitary(block_algebra({2}), rot) - rot).norm(), 1e-12);
  const StarAlgebra m2 = block_algebra({2});
  const ComplexMatrix b = random_invertible_in(m2, Seed{2});
  EXPECT_LE((positivizing_unitary(m2, b.adjoint() * b) - identity(2)).norm(), 1e-9);
}

TEST(Positivizer, MakesElementPositiveForEveryCentralP) {
  const StarAlgebra alg = block_algebra({1, 2});
  const CentralProjectionSet cps = central_projections(alg);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix a = random_invertible_in(alg, Seed{s});
    const Positivizer pos = positivize(alg, a);
    EXPECT_LE(pos.unitarity_residual, 1e-9);
    EXPECT_LE(pos.membership_residual, 1e-8);
    EXPECT_GE(pos.modulus_min_eigenvalue, -1e-9 * operator_norm(a));
    for (const ComplexMatrix& p : projection_lattice(cps, 3)) {
      EXPECT_TRUE(is_positive_deformed(DeformedAlgebra(alg, pos.unitary.adjoint(), p), a).positive);
    }
  }
}

TEST(Positivizer, Errors) {
  EXPECT_EQ(kind_of([] { positivize(d2(), diag({0, 1})); }), ErrorKind::Singular);
  EXPECT_EQ(kind_of([] { positivize(d2(), unit(2, 0, 1)); }), ErrorKind::NotMember);
}

TEST(PositivizerUniqueness, Examples) {
  // w = diag(1, e^{i theta}) breaks positivity of I
  const ComplexMatrix w = diag({1, std::exp(Complex(0, 0.3))});
  EXPECT_FALSE(is_psd(w * identity(2)));
  // a = diag(2,3) in D2: only w = I keeps w a positive
  const LawReport r = check_positivizer_uniqueness(d2(), diag({2, 3}), 20, Seed{1});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.cases_run, 20u);
  for (const Complex s : {Complex(-1), I1, -I1}) {
    EXPECT_FALSE(is_psd(diag({s, 1}) * diag({2, 3})));
  }
}

TEST(PositivizerUniqueness, SingularElementAdmitsTwo) {
  const SingularDemo demo = demo_singular_nonuniqueness(d2(), diag({0, 1}));
  EXPECT_TRUE(demo.singular_raised);
  ASSERT_EQ(demo.admissible.size(), 2u);
  // entrywise oracle: both diag(1,1) and diag(-1,1) make w a PSD
  for (const ComplexMatrix& w : {diag({1, 1}), diag({-1, 1})}) EXPECT_TRUE(is_psd(w.adjoint() * diag({0, 1})));
  bool plus = false, minus = false;
  for (const ComplexMatrix& u : demo.admissible) {
    plus |= (u - diag({1, 1})).norm() < 1e-9;
    minus |= (u - diag({-1, 1})).norm() < 1e-9;
  }
  EXPECT_TRUE(plus && minus);
}

TEST(Recovery, RoundTripNonCommutativeBlocks) {
  for (const std::vector<int>& blocks : {std::vector<int>{2}, {2, 2}, {2, 3}, {3, 2, 2}}) {
    const StarAlgebra alg = block_algebra(blocks);
    const CentralProjectionSet cps = central_projections(alg);
    const std::uint64_t lattice = 1ull << cps.count();
    for (std::uint64_t mask = 0; mask < lattice; ++mask) {
      const ComplexMatrix u = random_unitary_in(alg, Seed{mask + 10});
      const DeformedAlgebra d(alg, u, lattice_element(cps, alg.ambient_dim(), mask));
      const DeformationRecovery rec = recover_deformation(alg, structure_constants(d), star_table(d));
      EXPECT_LE(operator_norm(rec.u - u), 1e-7);
      EXPECT_EQ(rec.selector, selector_from_mask(mask, cps.count()));
      EXPECT_LE(operator_norm(rec.p - d.p()), 1e-7);
    }
  }
}

TEST(Recovery, OriginalTableGivesIdentity) {
  const StarAlgebra alg = block_algebra({2, 1});
  const DeformedAlgebra d(alg, identity(3), identity(3));
  const DeformationRecovery rec = recover_deformation(alg, original_structure_constants(alg), star_table(d));
  EXPECT_LE(operator_norm(rec.u - identity(3)), 1e-9);
  EXPECT_LE(operator_norm(rec.p - identity(3)), 1e-9);
}

TEST(Recovery, ZeroTableHasNoUnit) {
  const StarAlgebra alg = block_algebra({2});
  StructureConstants zero{alg.dim(), std::vector<ComplexVector>(alg.dim() * alg.dim(), ComplexVector::Zero(4))};
  const std::vector<ComplexVector> star = star_table(DeformedAlgebra(alg, identity(2), identity(2)));
  EXPECT_EQ(kind_of([&] { recover_deformation(alg, zero, star); }), ErrorKind::NoUnit);
}

TEST(Recovery, CorruptedTableIsNotDeformation) {
  const StarAlgebra alg = block_algebra({2});
  const DeformedAlgebra d(alg, identity(2), identity(2));
  StructureConstants sc = structure_constants(d);
  sc.at(1, 2) += ComplexVector::Constant(4, 0.3);
  EXPECT_EQ(kind_of([&] { recover_deformation(alg, sc, star_table(d)); }), ErrorKind::NotDeformation);
}

TEST(CstarIdentity, Examples) {
  const StarAlgebra m2 = block_algebra({2});
  const DeformedAlgebra plain(m2, identity(2), identity(2));
  const ComplexMatrix a = random_element(m2, Seed{3});
  EXPECT_NEAR(operator_norm(plain.product(plain.star(a), a)), std::pow(operator_norm(a), 2), 1e-9);

  const DeformedAlgebra d(d2(), diag({I1, 1}), unit(2, 0, 0));
  const ComplexMatrix b = diag({1, 2});
  EXPECT_NEAR(operator_norm(d.product(d.star(b), b)), 4.0, 1e-14);
}

TEST(CstarIdentity, BlockMaxNormIdentity) {
  const StarAlgebra alg = block_algebra({2, 3});
  const CentralProjectionSet cps = central_projections(alg);
  const DeformedAlgebra d(alg, random_unitary_in(alg, Seed{6}), cps.minimal[0]);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix a = random_element(alg, Seed{500 + s});
    const double oracle = std::max(operator_norm(cps.minimal[0] * a), operator_norm(cps.minimal[1] * a));
    EXPECT_NEAR(operator_norm(a), oracle, 1e-9 * oracle);
  }
  EXPECT_TRUE(verify_cstar_identity(d, 50, Seed{1}).passed());
}

TEST(JordanTheta, DiagonalArithmetic) {
  // theta(a) = a u; for a = I, u = diag(i,1): a o a = diag(i,1), theta of it = diag(-1,1) = theta(a)^2
  const ComplexMatrix u = diag({I1, 1});
  const DeformedAlgebra d(d2(), u, unit(2, 0, 0));
  const ComplexMatrix sq = d.product(identity(2), identity(2));
  EXPECT_LE((sq - diag({I1, 1})).norm(), 1e-15);
  EXPECT_LE((sq * u - diag({-1, 1})).norm(), 1e-15);
  EXPECT_LE((sq * u - (identity(2) * u) * (identity(2) * u)).norm(), 1e-15);
}
