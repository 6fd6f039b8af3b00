#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hardymod/error.hpp"
#include "hardymod/operators.hpp"
#include "oracles.hpp"

using namespace hardymod;

namespace {

std::vector<MultiIndex> basis_monomials(const TruncationGrid& g) {
  std::vector<MultiIndex> out;
  for (const auto& [k, ch] : enumerate_basis(g)) {
    if (ch == 0) out.push_back(k);
  }
  return out;
}

AnalyticSymbol random_polynomial(std::mt19937_64& rng, std::size_t n, const MultiIndex& degree, Index rows, Index cols) {
  AnalyticSymbol::CoefficientMap coeffs;
  TruncationGrid support(degree);
  for (const auto& k : support.monomials()) coeffs[k] = oracle::random_matrix(rng, rows, cols);
  return AnalyticSymbol::polynomial(n, rows, cols, std::move(coeffs));
}

}  // namespace

TEST(MultiIndex, ArithmeticAndOrder) {
  const MultiIndex a{2, 1};
  const MultiIndex b{1, 1};
  EXPECT_EQ(a + b, (MultiIndex{3, 2}));
  EXPECT_EQ(a - b, (MultiIndex{1, 0}));
  EXPECT_THROW(b - a, Error);
  EXPECT_TRUE(b.fits_within(a));
  EXPECT_FALSE(a.fits_within(b));
  EXPECT_EQ(a.total_degree(), 3);
  EXPECT_THROW(MultiIndex({1, -1}), Error);
}

TEST(Enumeration, SingleVariable) {
  const auto m = basis_monomials(TruncationGrid(MultiIndex{2}));
  EXPECT_EQ(m, (std::vector<MultiIndex>{{0}, {1}, {2}}));
}

TEST(Enumeration, GradedLexTwoVariables) {
  const auto m = basis_monomials(TruncationGrid(MultiIndex{1, 1}));
  EXPECT_EQ(m, (std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
}

TEST(Enumeration, ChannelsAdjacent) {
  const TruncationGrid g(MultiIndex{1, 1}, 2);
  const auto entries = enumerate_basis(g);
  ASSERT_EQ(entries.size(), 8u);
  for (std::size_t p = 0; p < entries.size(); p += 2) {
    EXPECT_EQ(entries[p].first, entries[p + 1].first);
    EXPECT_EQ(entries[p].second, 0);
    EXPECT_EQ(entries[p + 1].second, 1);
  }
}

TEST(Enumeration, BijectionAndSize) {
  for (const auto& caps : {MultiIndex{3}, MultiIndex{2, 4}, MultiIndex{2, 1, 3}}) {
    for (int m : {1, 3}) {
      const TruncationGrid g(caps, m);
      Index expected = m;
      for (std::size_t i = 0; i < caps.size(); ++i) expected *= caps[i] + 1;
      ASSERT_EQ(g.size(), expected);
      for (Index p = 0; p < g.size(); ++p) {
        const auto [k, ch] = g.entry(p);
        EXPECT_EQ(g.index(k, ch), p);
        if (p > 0) {
          const auto prev = g.entry(p - 1);
          EXPECT_TRUE(prev.first == k ? prev.second < ch : graded_lex_less(prev.first, k));
        }
      }
    }
  }
}

TEST(HardyVector, ParsevalAndOrthogonality) {
  std::mt19937_64 rng(11);
  const TruncationGrid g(MultiIndex{3, 2}, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix c = oracle::random_matrix(rng, g.size(), 1);
    const HardyVector v(g, c.col(0));
    double sum = 0.0;
    for (Index p = 0; p < g.size(); ++p) sum += std::norm(c(p, 0));
    EXPECT_NEAR(v.norm() * v.norm(), sum, 1e-12 * sum);
  }
  const auto a = HardyVector::monomial(g, {1, 0});
  const auto b = HardyVector::monomial(g, {0, 1});
  EXPECT_EQ(a.inner(b), Complex(0.0));
  EXPECT_EQ(a.inner(a), Complex(1.0));
}

TEST(HardyVector, EvaluationIsTheCoefficientSum) {
  const TruncationGrid g(MultiIndex{2, 2});
  Vector c = Vector::Zero(g.size());
  c(g.index({1, 0})) = 2.0;
  c(g.index({1, 2})) = Complex(0.0, 1.0);
  const std::vector<Complex> z{0.3, Complex(-0.2, 0.1)};
  const Complex expected = 2.0 * z[0] + Complex(0.0, 1.0) * z[0] * z[1] * z[1];
  EXPECT_NEAR(std::abs(HardyVector(g, c).evaluate(z)(0) - expected), 0.0, 1e-15);
}

TEST(MultOperator, ShiftDropsOverflow) {
  const TruncationGrid g(MultiIndex{1, 1});
  const Matrix m = mult_operator(AnalyticSymbol::monomial({1, 0}), g).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected(g.index({1, 0}), g.index({0, 0})) = 1.0;
  expected(g.index({1, 1}), g.index({0, 1})) = 1.0;
  EXPECT_EQ(m, expected);
}

TEST(MultOperator, ShiftMovesEveryMonomialInsideTheCaps) {
  const TruncationGrid g(MultiIndex{3, 2, 2});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(shift_matrix(g, i), oracle::shift(g, i));
    EXPECT_EQ(mult_operator(AnalyticSymbol::monomial(MultiIndex::unit(3, i)), g).matrix(), oracle::shift(g, i));
  }
}

TEST(MultOperator, ConstantUnitaryIsBlockDiagonal) {
  Matrix u(2, 2);
  u << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  const TruncationGrid g(MultiIndex{2, 1}, 2);
  const Matrix m = mult_operator(AnalyticSymbol::constant(2, u), g).matrix();
  Matrix expected = Matrix::Zero(g.size(), g.size());
  for (Index b = 0; b < g.monomial_count(); ++b) expected.block(2 * b, 2 * b, 2, 2) = u;
  EXPECT_NEAR((m - expected).norm(), 0.0, 1e-15);
}

TEST(MultOperator, PhiColumnAtOrigin) {
  // num * (1/2) sum_j ((z1 + z2)/2)^j through degree (1,1).
  const TruncationGrid g(MultiIndex{1, 1});
  const Matrix m = mult_operator(phi_symbol(), g).matrix();
  const Index o = g.index({0, 0});
  EXPECT_NEAR(std::abs(m(g.index({0, 0}), o)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(g.index({1, 0}), o) - (-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(g.index({0, 1}), o) - (-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(g.index({1, 1}), o) - 0.5), 0.0, 1e-15);
}

TEST(MultOperator, MultiplicativeOnTheExactnessWindow) {
  std::mt19937_64 rng(5);
  const MultiIndex caps{5, 4};
  for (int trial = 0; trial < 6; ++trial) {
    const MultiIndex da{1 + trial % 2, 1};
    const MultiIndex db{1, trial % 3};
    const AnalyticSymbol a = random_polynomial(rng, 2, da, 2, 3);
    const AnalyticSymbol b = random_polynomial(rng, 2, db, 3, 2);
    const TruncationGrid g(caps, 2);
    const Matrix lhs = mult_operator(a * b, g).matrix();
    const Matrix rhs = mult_operator(a, g.with_coeff_dim(3)).matrix() * mult_operator(b, g).matrix();
    const auto window = g.window_positions(shrink(caps, da + db));
    ASSERT_FALSE(window.empty());
    const double err = (lhs(Eigen::all, window) - rhs(Eigen::all, window)).cwiseAbs().maxCoeff();
    EXPECT_LE(err, 1e-12);
  }
}

TEST(RationalTaylor, InverseOfTwoMinusSum) {
  // 1/(2 - z1 - z2) = (1/2) sum_j ((z1 + z2)/2)^j, so c_k = C(|k|, k1) / 2^(|k| + 1).
  const ScalarPolynomial den{{{0, 0}, 2.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}};
  const AnalyticSymbol one = AnalyticSymbol::constant(2, Matrix::Identity(1, 1));
  const MultiIndex caps{6, 6};
  const AnalyticSymbol q = rational_taylor(one, den, caps);
  EXPECT_NEAR(std::abs(q.coefficient({0, 0})(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(q.coefficient({1, 0})(0, 0) - 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(q.coefficient({1, 1})(0, 0) - 0.25), 0.0, 1e-15);
  const TruncationGrid grid(caps);
  for (const auto& k : grid.monomials()) {
    const int t = k.total_degree();
    const double expected = oracle::binomial(t, k[0]) / std::pow(2.0, t + 1);
    EXPECT_NEAR(std::abs(q.coefficient(k)(0, 0) - expected), 0.0, 1e-14) << k.to_string();
  }
}

TEST(RationalTaylor, UnitDenominatorAndGeometricSeries) {
  const AnalyticSymbol p = AnalyticSymbol::polynomial(
      2, 1, 1, {{{0, 1}, Matrix::Constant(1, 1, 3.0)}, {{2, 0}, Matrix::Constant(1, 1, Complex(0, 1))}});
  const AnalyticSymbol q = rational_taylor(p, {{{0, 0}, 1.0}}, {3, 3});
  const TruncationGrid small(MultiIndex{3, 3});
  for (const auto& k : small.monomials()) {
    EXPECT_EQ(q.coefficient(k), p.coefficient(k));
  }
  const AnalyticSymbol one = AnalyticSymbol::constant(2, Matrix::Identity(1, 1));
  const AnalyticSymbol g = rational_taylor(one, {{{0, 0}, 1.0}, {{1, 0}, -1.0}}, {5, 3});
  const TruncationGrid wide(MultiIndex{5, 3});
  for (const auto& k : wide.monomials()) {
    EXPECT_EQ(g.coefficient(k)(0, 0), k[1] == 0 ? Complex(1.0) : Complex(0.0)) << k.to_string();
  }
}

TEST(RationalTaylor, DenominatorTimesSeriesIsTheNumerator) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  const MultiIndex caps{5, 5};
  const TruncationGrid grid(caps);
  for (int trial = 0; trial < 8; ++trial) {
    const AnalyticSymbol num = random_polynomial(rng, 2, {2, 1}, 2, 2);
    ScalarPolynomial den{{{0, 0}, Complex(2.0 + n(rng) * 0.1, 0.0)}};
    den[{1, 0}] = Complex(n(rng), n(rng)) * 0.3;
    den[{1, 1}] = Complex(n(rng), n(rng)) * 0.3;
    const AnalyticSymbol q = rational_taylor(num, den, caps);
    for (const auto& k : grid.monomials()) {
      Matrix acc = Matrix::Zero(2, 2);
      for (const auto& [j, c] : den) {
        if (j.fits_within(k)) acc += c * q.coefficient(k - j);
      }
      EXPECT_LE((acc - num.coefficient(k)).cwiseAbs().maxCoeff(), 1e-12) << k.to_string();
    }
  }
}

TEST(RationalSymbol, EvaluationMatchesClosedForm) {
  const AnalyticSymbol b = AnalyticSymbol::blaschke(2, 0, Complex(0.5, 0.2));
  const std::vector<Complex> z{Complex(0.3, -0.1), 0.7};
  const Complex a(0.5, 0.2);
  const Complex expected = (z[0] - a) / (1.0 - std::conj(a) * z[0]);
  EXPECT_NEAR(std::abs(b.evaluate(z)(0, 0) - expected), 0.0, 1e-15);
  EXPECT_THROW(AnalyticSymbol::blaschke(2, 0, 1.0), Error);
}

TEST(Innerness, MonomialIsExactlyInner) {
  const auto r = innerness_check(AnalyticSymbol::monomial({1, 1}), TruncationGrid(MultiIndex{4, 4}), 16);
  EXPECT_NEAR(r.torus_deviation, 0.0, 1e-15);
  EXPECT_NEAR(r.isometry_defect, 0.0, 1e-15);
  EXPECT_TRUE(r.passed());
}

TEST(Innerness, HalfShiftMissesByThreeQuarters) {
  const auto r =
      innerness_check(AnalyticSymbol::monomial({1, 0}, 1, 0.5), TruncationGrid(MultiIndex{3, 3}), 16);
  EXPECT_NEAR(r.torus_deviation, 0.75, 1e-14);
  EXPECT_FALSE(r.passed());
}

TEST(Innerness, PhiOnTheTorus) {
  const auto r = innerness_check(phi_symbol(), TruncationGrid(MultiIndex{6, 6}), 64);
  EXPECT_LE(r.torus_deviation, 1e-10);
  EXPECT_FALSE(r.evaluation_overflow);
  EXPECT_TRUE(r.passed());
}

TEST(Innerness, DirectEvaluationAgreesOnTheTorus) {
  // |phi|^2 - 1 at torus points evaluated from the closed form by hand.
  double worst = 0.0;
  const double pi = std::acos(-1.0);
  for (int a = 0; a < 64; ++a) {
    for (int b = 0; b < 64; ++b) {
      const Complex z1 = std::polar(1.0, 2 * pi * (a + 0.5) / 64);
      const Complex z2 = std::polar(1.0, 2 * pi * (b + 0.5) / 64);
      const Complex phi = (2.0 * z1 * z2 - z1 - z2) / (2.0 - z1 - z2);
      worst = std::max(worst, std::abs(std::norm(phi) - 1.0));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Grid, RejectsBadCaps) {
  EXPECT_THROW(TruncationGrid(MultiIndex{}), Error);
  EXPECT_THROW(TruncationGrid(MultiIndex{2, 2}, 0), Error);
}
