#include <gtest/gtest.h>

#include <cmath>

#include "hardymod/error.hpp"
#include "hardymod/factorization.hpp"
#include "hardymod/linalg.hpp"
#include "oracles.hpp"

using namespace hardymod;

namespace {

FactorizationOptions exact(double tol = 1e-10) {
  FactorizationOptions o;
  o.tol = tol;
  return o;
}

AnalyticSymbol z(std::size_t i, int p = 1) {
  MultiIndex k = MultiIndex::zero(2);
  return AnalyticSymbol::monomial(k.with(i, p));
}

}  // namespace

TEST(DivideInner, MonomialQuotient) {
  const TruncationGrid g(MultiIndex{6, 6});
  const Division d = divide_inner(z(0) * z(1), z(0), g, exact());
  EXPECT_LE(d.reconstruction_residual, 1e-10);
  EXPECT_LE(d.containment_residual, 1e-10);
  EXPECT_LE(d.commutation_residual, 1e-10);
  const AnalyticSymbol psi = d.psi.pruned(1e-14);
  ASSERT_EQ(psi.coefficients().size(), 1u);
  EXPECT_EQ(psi.coefficients().begin()->first, (MultiIndex{0, 1}));
  EXPECT_NEAR(std::abs(psi.coefficients().begin()->second(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(DivideInner, RejectsNonDivisors) {
  const TruncationGrid g(MultiIndex{4, 4});
  try {
    divide_inner(z(0), z(1), g, exact());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
    EXPECT_NE(std::string(e.what()).find("not divisible"), std::string::npos);
  }
}

TEST(DivideInner, RejectsNonInnerInput) {
  const TruncationGrid g(MultiIndex{4, 4});
  EXPECT_THROW(divide_inner(AnalyticSymbol::monomial({1, 1}, 1, 0.5), z(0), g, exact()), Error);
}

TEST(DivideInner, BlaschkeFactorsOff) {
  // The z1 margin keeps |a|^margin below the tolerance.
  const AnalyticSymbol b = AnalyticSymbol::blaschke(2, 0, 0.2);
  const TruncationGrid g(MultiIndex{16, 4});
  FactorizationOptions o = exact(1e-6);
  o.rational_margin = MultiIndex{10, 0};
  const Division d = divide_inner(b * z(1), b, g, o);
  EXPECT_LE(d.reconstruction_residual, 1e-6);
  EXPECT_LE(d.commutation_residual, 1e-6);
  const AnalyticSymbol psi = d.psi.pruned(1e-6);
  ASSERT_EQ(psi.coefficients().size(), 1u);
  EXPECT_EQ(psi.coefficients().begin()->first, (MultiIndex{0, 1}));
}

TEST(FactorizationWitness, MonomialExample) {
  const TruncationGrid g(MultiIndex{6, 6});
  const FactorizationWitness w = invariant_subspace_from_factorization(z(0) * z(1), z(0), g, exact());
  for (const auto& [name, v] : w.residuals.residuals) EXPECT_LE(v, 1e-10) << name;
  // M = z1 H^2 minus z1 z2 H^2 is spanned by z1^a with a >= 1.
  const Matrix pm = w.m_basis * w.m_basis.adjoint();
  const Matrix expected =
      oracle::monomial_projection(w.grid, [](const MultiIndex& k) { return k[0] >= 1 && k[1] == 0; });
  EXPECT_LE((pm - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(w.residuals.diagnostics.at("m_dimension"), 6.0);

  const auto check = beurling_submodule_check(w.m_basis, z(0) * z(1), g, exact());
  EXPECT_TRUE(check.verdict("sum_cross_commutator"));
  EXPECT_TRUE(check.verdict("sum_beurling"));
  EXPECT_TRUE(check.verdict("agreement"));
}

TEST(FactorizationWitness, TrivialFactorGivesEmptyM) {
  const TruncationGrid g(MultiIndex{4, 4});
  const FactorizationWitness w = invariant_subspace_from_factorization(z(0), z(0), g, exact());
  EXPECT_EQ(w.m_basis.cols(), 0);
  EXPECT_LE(w.residuals.residual("complement"), 1e-12);
}

TEST(BeurlingSubmoduleCheck, RejectsSubspacesOutsideTheQuotient) {
  const TruncationGrid g(MultiIndex{4, 4});
  Matrix inside = Matrix::Zero(g.size(), 1);
  inside(g.index({1, 1}), 0) = 1.0;
  EXPECT_THROW(beurling_submodule_check(inside, z(0) * z(1), g, exact()), Error);
}

TEST(BeurlingSubmoduleCheck, RejectsNonInvariantSums) {
  const TruncationGrid g(MultiIndex{4, 4});
  Matrix constants = Matrix::Zero(g.size(), 1);
  constants(g.index({0, 0}), 0) = 1.0;
  EXPECT_THROW(beurling_submodule_check(constants, z(0) * z(1), g, exact()), Error);
}

TEST(Constancy, UnitaryConstant) {
  Matrix u(2, 2);
  u << 0.0, 1.0, 1.0, 0.0;
  const TruncationGrid g(MultiIndex{3, 3}, 2);
  const auto r = constancy_check(AnalyticSymbol::constant(2, u), g, exact());
  EXPECT_TRUE(r.surjective);
  EXPECT_TRUE(r.constant_coefficients);
  EXPECT_TRUE(r.unitary_constant());
}

TEST(Constancy, MonomialIsNotSurjective) {
  const auto r = constancy_check(z(0), TruncationGrid(MultiIndex{3, 3}), exact());
  EXPECT_FALSE(r.surjective);
  EXPECT_FALSE(r.constant_coefficients);
  EXPECT_TRUE(r.consistent());
  EXPECT_NEAR(r.range_gap, 1.0, 1e-12);
}

TEST(Constancy, ConsistentOnSeveralSymbols) {
  const TruncationGrid g(MultiIndex{5, 5});
  for (const AnalyticSymbol& s : {z(0) * z(1), AnalyticSymbol::blaschke(2, 1, 0.4), phi_symbol(),
                                  AnalyticSymbol::constant(2, Matrix::Constant(1, 1, Complex(0.6, 0.8)))}) {
    EXPECT_TRUE(constancy_check(s, g, exact(1e-6)).consistent());
  }
}

TEST(Kernels, ClosedFormsAgree) {
  const std::vector<KernelPoint> pts = sample_kernel_points(30, 0.6, 11);
  for (const auto& p : pts) {
    const Complex s = szego_kernel(p.z, p.w);
    const Complex expected = s - 1.0;
    EXPECT_LE(std::abs(vanishing_kernel(p.z, p.w) - expected), 1e-13);
    EXPECT_LE(std::abs(vanishing_kernel(p.z, p.w) - cofactor_kernel(p.z, p.w) * s), 1e-13);
  }
}

TEST(Kernels, PartialSumsConverge) {
  const std::vector<KernelPoint> pts = sample_kernel_points(20, 0.6, 5);
  for (const auto& p : pts) {
    const double d10 = std::abs(vanishing_kernel(p.z, p.w) - vanishing_kernel_sum(p.z, p.w, {10, 10}));
    const double d20 = std::abs(vanishing_kernel(p.z, p.w) - vanishing_kernel_sum(p.z, p.w, {20, 20}));
    EXPECT_LE(d20, d10 + 1e-15);
    EXPECT_LE(d20, 1e-8);
  }
}

TEST(Kernels, RejectPointsOutsideThePolydisc) {
  EXPECT_THROW(KernelPoint({1.0, 0.0}, {0.0, 0.0}), Error);
  EXPECT_THROW(KernelPoint({0.1}, {0.1, 0.2}), Error);
}

TEST(GramSearch, FindsNegativityAndIgnoresJobs) {
  GramSearchOptions o;
  o.seed = 1;
  o.threshold = 1e-6;
  const GramWitness a = gram_negativity_search(o);
  o.jobs = 4;
  const GramWitness b = gram_negativity_search(o);
  ASSERT_TRUE(a.found);
  EXPECT_LT(a.min_eigenvalue, -1e-6);
  EXPECT_EQ(a.trial, b.trial);
  EXPECT_EQ(a.min_eigenvalue, b.min_eigenvalue);
  // Independent Gram matrix from the witness points.
  const Index m = static_cast<Index>(a.points.size());
  Matrix gram(m, m);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) gram(r, c) = cofactor_kernel(a.points[r], a.points[c]);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  EXPECT_NEAR(es.eigenvalues().minCoeff(), a.min_eigenvalue, 1e-12);
}

TEST(ConstantsQuotient, SuiteOnTheDefaultGrid) {
  ConstantsQuotientOptions o;
  o.search.seed = 1;
  o.search.threshold = 1e-6;
  const auto r = constants_quotient_suite(TruncationGrid(MultiIndex{20, 20}), sample_kernel_points(20, 0.6, 1), o);
  EXPECT_LE(r.kernel_max_deviation, 1e-8);
  EXPECT_TRUE(r.gram.found);
  EXPECT_LE(r.phi_innerness.torus_deviation, 1e-10);
  EXPECT_TRUE(r.phi_vanishes_at_origin);
  EXPECT_TRUE(r.strict_inclusions);
  EXPECT_NEAR(r.constants_beurling_residual, 1.0, 1e-12);
  for (const auto& [name, ok] : r.summary.verdicts) EXPECT_TRUE(ok) << name;
}
