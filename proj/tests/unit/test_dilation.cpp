#include <gtest/gtest.h>

#include "hardymod/dilation.hpp"
#include "hardymod/error.hpp"
#include "hardymod/linalg.hpp"
#include "oracles.hpp"

using namespace hardymod;

namespace {

Matrix four_term_defect(const Matrix& a, const Matrix& b) {
  const Index d = a.rows();
  return Matrix::Identity(d, d) - a * a.adjoint() - b * b.adjoint() + (a * b) * (a * b).adjoint();
}

}  // namespace

TEST(ContractionTuple, Validation) {
  EXPECT_THROW(ContractionTuple({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), Error);
  EXPECT_THROW(ContractionTuple({2.0 * Matrix::Identity(2, 2)}), Error);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    ContractionTuple({a, Matrix(a.adjoint())});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
    EXPECT_NE(std::string(e.what()).find("non-commuting input"), std::string::npos);
  }
}

TEST(BrehmerDefect, ZeroTuple) {
  const auto d = brehmer_defect(ContractionTuple({Matrix::Zero(1, 1), Matrix::Zero(1, 1)}));
  EXPECT_EQ(d.defect_sq(0, 0), Complex(1.0));
  EXPECT_TRUE(d.psd);
  EXPECT_EQ(d.defect_space_basis.cols(), 1);
}

TEST(BrehmerDefect, TruncatedShiftsGiveTheConstantsProjection) {
  const TruncationGrid g(MultiIndex{3, 3});
  const ContractionTuple t({shift_matrix(g, 0), shift_matrix(g, 1)});
  const auto d = brehmer_defect(t);
  const Matrix expected = oracle::monomial_projection(g, [](const MultiIndex& k) { return k.is_zero(); });
  const auto window = g.window_positions(std::vector<int>{2, 2});
  EXPECT_LE(linalg::spectral_norm(linalg::compress(d.defect_sq - expected, window)), 1e-14);
}

TEST(BrehmerDefect, MatchesTheFourTermSum) {
  const Matrix n = jordan_block(4);
  const Matrix a = 0.5 * n;
  const Matrix b = 0.5 * n * n;
  const auto d = brehmer_defect(ContractionTuple({a, b}));
  const Matrix oracle_sum = four_term_defect(a, b);
  EXPECT_LE((d.defect_sq - oracle_sum).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(oracle_sum);
  EXPECT_EQ(d.psd, es.eigenvalues().minCoeff() >= -1e-10);
}

TEST(Pureness, Rules) {
  const auto nil = pureness_check(jordan_block(4));
  EXPECT_TRUE(nil.pure);
  EXPECT_EQ(nil.rule, PurenessRule::Nilpotent);
  const auto id = pureness_check(Matrix::Identity(3, 3));
  EXPECT_FALSE(id.pure);
  EXPECT_EQ(id.rule, PurenessRule::NotPure);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    Matrix m = oracle::random_matrix(rng, 5, 5);
    m *= 0.9 / linalg::spectral_norm(m);
    EXPECT_TRUE(pureness_check(m).pure);
  }
}

TEST(CanonicalDilation, ZeroTupleEmbedsConstants) {
  const auto d = canonical_dilation(ContractionTuple({Matrix::Zero(1, 1), Matrix::Zero(1, 1)}), {3, 3});
  EXPECT_EQ(d.isometry_residual, 0.0);
  EXPECT_EQ(d.intertwining_residual, 0.0);
  ASSERT_EQ(d.pi.cols(), 1);
  EXPECT_EQ(std::abs(d.pi(d.grid.index({0, 0}), 0)), 1.0);
  EXPECT_EQ(d.pi.norm(), 1.0);
}

TEST(CanonicalDilation, NilpotentPairsAreExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ContractionTuple t = random_nilpotent_brehmer_pair(seed);
    const auto d = canonical_dilation(t, {4, 4});
    EXPECT_LE(d.isometry_residual, 1e-12) << seed;
    EXPECT_LE(d.intertwining_residual, 1e-12) << seed;
    EXPECT_TRUE(d.grid_sufficient);
    // Compression roundtrip: Pi^* M_i Pi = T_i.
    for (std::size_t i = 0; i < 2; ++i) {
      const Matrix back = d.pi.adjoint() * shift_matrix(d.grid, i) * d.pi;
      EXPECT_LE((back - t[i]).cwiseAbs().maxCoeff(), 1e-12) << seed;
    }
  }
}

TEST(CanonicalDilation, MonomialQuotientRoundTrip) {
  const QuotientData q =
      quotient_data(submodule_projection(AnalyticSymbol::monomial({1, 1}), TruncationGrid(MultiIndex{6, 6})));
  const ContractionTuple t(q.compressions.operators);
  const auto d = canonical_dilation(t, {6, 6});
  EXPECT_LE(d.isometry_residual, 1e-8);
  EXPECT_LE(d.intertwining_residual, 1e-8);
}

TEST(CanonicalDilation, Preconditions) {
  Matrix n = Matrix::Zero(2, 2);
  n(0, 1) = 1.0;
  try {
    canonical_dilation(ContractionTuple({n, n}), {3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("Brehmer precondition failed", 0), 0u);
  }
  EXPECT_THROW(canonical_dilation(ContractionTuple({Matrix::Identity(1, 1), Matrix::Zero(1, 1)}), {3, 3}), Error);
}

TEST(ModelCorrespondence, MonomialQuotientPassesConditionB) {
  const auto r = model_correspondence(AnalyticSymbol::monomial({1, 1}), TruncationGrid(MultiIndex{5, 5}));
  EXPECT_LE(r.residual("brehmer"), 1e-10);
  EXPECT_LE(r.residual("annihilation"), 1e-10);
  EXPECT_EQ(r.residual("pureness"), 0.0);
  EXPECT_TRUE(r.verdict("condition_b"));
}

TEST(ModelCorrespondence, ZeroTupleFailsAnnihilation) {
  const auto r = model_correspondence(ContractionTuple({Matrix::Zero(1, 1), Matrix::Zero(1, 1)}));
  EXPECT_EQ(r.residual("annihilation"), 1.0);
  EXPECT_EQ(r.residual("condition_b"), 1.0);
  EXPECT_FALSE(r.verdict("condition_b"));
}

TEST(ModelCorrespondence, ScalarPairResidual) {
  const Complex l(0.3, 0.4);
  const Complex m(-0.6, 0.1);
  const auto r = model_correspondence(ContractionTuple({Matrix::Constant(1, 1, l), Matrix::Constant(1, 1, m)}));
  const double expected = (1 - std::norm(l)) * (1 - std::norm(m));
  EXPECT_NEAR(r.residual("annihilation"), expected, 1e-15);
  EXPECT_FALSE(r.verdict("condition_b"));
}

TEST(ModelCorrespondence, AgreesWithTheBeurlingVerdict) {
  const TruncationGrid g(MultiIndex{4, 4});
  const std::vector<SubspaceData> subs = {
      submodule_projection(AnalyticSymbol::monomial({1, 1}), g), submodule_projection(AnalyticSymbol::monomial({2, 0}), g),
      vanishing_at_origin(g), monomial_ideal(g, {{2, 0}, {0, 1}}), monomial_ideal(g, {{1, 1}})};
  for (const auto& s : subs) {
    const QuotientData q = quotient_data(s);
    EXPECT_EQ(beurling_criterion(q).verdict("beurling"), model_correspondence(q).verdict("condition_b"));
  }
}

TEST(RandomPairs, AreCommutingBrehmerAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ContractionTuple a = random_nilpotent_brehmer_pair(seed);
    const ContractionTuple b = random_nilpotent_brehmer_pair(seed);
    EXPECT_EQ(a[0], b[0]);
    EXPECT_LE((a[0] * a[1] - a[1] * a[0]).norm(), 1e-14);
    EXPECT_TRUE(brehmer_defect(a).psd);
  }
}
