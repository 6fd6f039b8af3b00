#include "hardymod/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "hardymod/error.hpp"

namespace hardymod {

namespace {

Complex power_product(std::span<const Complex> z, const MultiIndex& k) {
  Complex out = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (int p = 0; p < k[i]; ++p) out *= z[i];
  }
  return out;
}

void check_point(std::size_t variables, std::span<const Complex> z) {
  if (z.size() != variables) throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong length");
}

}  // namespace

AnalyticSymbol AnalyticSymbol::polynomial(std::size_t variables, Index rows, Index cols,
                                          CoefficientMap coeffs) {
  if (variables == 0 || rows < 1 || cols < 1) throw Error(ErrorKind::InvalidArgument, "symbol shape must be positive");
  AnalyticSymbol s(variables, rows, cols);
  for (auto& [k, c] : coeffs) {
    if (k.size() != variables) throw Error(ErrorKind::DimensionMismatch, "coefficient index " + k.to_string() + " has wrong length");
    if (c.rows() != rows || c.cols() != cols) throw Error(ErrorKind::DimensionMismatch, "coefficient at " + k.to_string() + " has wrong shape");
  }
  s.coeffs_ = std::move(coeffs);
  return s;
}

AnalyticSymbol AnalyticSymbol::monomial(const MultiIndex& k, int coeff_dim, Complex scale) {
  CoefficientMap c;
  c.emplace(k, scale * Matrix::Identity(coeff_dim, coeff_dim));
  return polynomial(k.size(), coeff_dim, coeff_dim, std::move(c));
}

AnalyticSymbol AnalyticSymbol::constant(std::size_t variables, Matrix value) {
  const Index r = value.rows();
  const Index c = value.cols();
  CoefficientMap m;
  m.emplace(MultiIndex::zero(variables), std::move(value));
  return polynomial(variables, r, c, std::move(m));
}

AnalyticSymbol AnalyticSymbol::rational(const AnalyticSymbol& numerator, ScalarPolynomial denominator) {
  if (!numerator.is_polynomial()) throw Error(ErrorKind::InvalidArgument, "rational numerator must be polynomial");
  const MultiIndex origin = MultiIndex::zero(numerator.variables());
  double scale = 0.0;
  for (const auto& [k, v] : denominator) {
    if (k.size() != numerator.variables()) throw Error(ErrorKind::DimensionMismatch, "denominator index has wrong length");
    scale = std::max(scale, std::abs(v));
  }
  auto it = denominator.find(origin);
  if (it == denominator.end() || std::abs(it->second) <= 1e-14 * scale || scale == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "denominator vanishes at the origin");
  }
  AnalyticSymbol s(numerator.variables(), numerator.rows(), numerator.cols());
  s.rational_ = RationalForm{std::make_shared<const AnalyticSymbol>(numerator), std::move(denominator)};
  return s;
}

AnalyticSymbol AnalyticSymbol::blaschke(std::size_t variables, std::size_t v, Complex a) {
  if (std::abs(a) >= 1.0) throw Error(ErrorKind::InvalidArgument, "Blaschke zero must lie in the open disc");
  const MultiIndex origin = MultiIndex::zero(variables);
  const MultiIndex ev = MultiIndex::unit(variables, v);
  CoefficientMap num;
  num.emplace(origin, Matrix::Constant(1, 1, -a));
  num.emplace(ev, Matrix::Constant(1, 1, 1.0));
  ScalarPolynomial den{{origin, 1.0}, {ev, -std::conj(a)}};
  if (a == Complex(0.0)) return polynomial(variables, 1, 1, {{ev, Matrix::Constant(1, 1, 1.0)}});
  return rational(polynomial(variables, 1, 1, std::move(num)), std::move(den));
}

Matrix AnalyticSymbol::coefficient(const MultiIndex& k) const {
  if (rational_ && !(expanded_caps_ && k.fits_within(*expanded_caps_))) {
    throw Error(ErrorKind::InvalidArgument, "rational symbol not expanded to " + k.to_string());
  }
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) return Matrix::Zero(rows_, cols_);
  return it->second;
}

MultiIndex AnalyticSymbol::degree() const {
  if (rational_) throw Error(ErrorKind::InvalidArgument, "degree is defined for polynomial symbols only");
  std::vector<int> d(variables_, 0);
  for (const auto& [k, c] : coeffs_) {
    if (c.cwiseAbs().maxCoeff() == 0.0) continue;
    for (std::size_t i = 0; i < variables_; ++i) d[i] = std::max(d[i], k[i]);
  }
  return MultiIndex(std::move(d));
}

Matrix AnalyticSymbol::evaluate(std::span<const Complex> z) const {
  check_point(variables_, z);
  if (rational_) {
    const Complex den = hardymod::evaluate(rational_->denominator, z);
    return rational_->numerator->evaluate(z) / den;
  }
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& [k, c] : coeffs_) out += c * power_product(z, k);
  return out;
}

AnalyticSymbol AnalyticSymbol::expanded_to(const MultiIndex& caps) const {
  if (!rational_) return *this;
  if (expanded_caps_ && caps.fits_within(*expanded_caps_)) return *this;
  return rational_taylor(*rational_->numerator, rational_->denominator, caps);
}

AnalyticSymbol AnalyticSymbol::pruned(double tol) const {
  AnalyticSymbol s = *this;
  std::erase_if(s.coeffs_, [tol](const auto& kv) { return kv.second.cwiseAbs().maxCoeff() <= tol; });
  return s;
}

AnalyticSymbol operator*(const AnalyticSymbol& a, const AnalyticSymbol& b) {
  if (a.variables() != b.variables()) throw Error(ErrorKind::DimensionMismatch, "symbols in different numbers of variables");
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "symbol shapes do not compose");
  auto numerator_of = [](const AnalyticSymbol& s) -> const AnalyticSymbol& {
    return s.is_polynomial() ? s : *s.rational_form()->numerator;
  };
  const AnalyticSymbol& na = numerator_of(a);
  const AnalyticSymbol& nb = numerator_of(b);
  AnalyticSymbol::CoefficientMap out;
  for (const auto& [ka, ca] : na.coefficients()) {
    for (const auto& [kb, cb] : nb.coefficients()) {
      Matrix prod = ca * cb;
      auto [it, inserted] = out.try_emplace(ka + kb, prod);
      if (!inserted) it->second += prod;
    }
  }
  AnalyticSymbol num = AnalyticSymbol::polynomial(a.variables(), a.rows(), b.cols(), std::move(out));
  if (a.is_polynomial() && b.is_polynomial()) return num;
  const ScalarPolynomial one{{MultiIndex::zero(a.variables()), 1.0}};
  const ScalarPolynomial& da = a.is_polynomial() ? one : a.rational_form()->denominator;
  const ScalarPolynomial& db = b.is_polynomial() ? one : b.rational_form()->denominator;
  return AnalyticSymbol::rational(num, multiply(da, db));
}

Complex evaluate(const ScalarPolynomial& p, std::span<const Complex> z) {
  Complex out = 0.0;
  for (const auto& [k, c] : p) out += c * power_product(z, k);
  return out;
}

ScalarPolynomial multiply(const ScalarPolynomial& a, const ScalarPolynomial& b) {
  ScalarPolynomial out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) out[ka + kb] += ca * cb;
  }
  return out;
}

AnalyticSymbol rational_taylor(const AnalyticSymbol& numerator, const ScalarPolynomial& denominator,
                               const MultiIndex& caps) {
  // Validates the denominator and shapes.
  AnalyticSymbol result = AnalyticSymbol::rational(numerator, denominator);
  if (caps.size() != numerator.variables()) throw Error(ErrorKind::DimensionMismatch, "caps length differs from symbol");

  const MultiIndex origin = MultiIndex::zero(caps.size());
  const Complex d0 = denominator.at(origin);
  const TruncationGrid grid(caps);

  // Graded order guarantees every k - j with j != 0 is already known.
  std::map<MultiIndex, Matrix> q;
  for (const auto& k : grid.monomials()) {
    Matrix acc = Matrix::Zero(numerator.rows(), numerator.cols());
    if (auto it = numerator.coefficients().find(k); it != numerator.coefficients().end()) acc = it->second;
    for (const auto& [j, dj] : denominator) {
      if (j.is_zero() || !j.fits_within(k)) continue;
      auto prev = q.find(k - j);
      if (prev != q.end()) acc -= dj * prev->second;
    }
    acc /= d0;
    if (acc.cwiseAbs().maxCoeff() != 0.0) q.emplace(k, std::move(acc));
  }
  result.coeffs_ = std::move(q);
  result.expanded_caps_ = caps;
  return result;
}

AnalyticSymbol phi_symbol() {
  const MultiIndex o{0, 0}, e1{1, 0}, e2{0, 1}, e12{1, 1};
  AnalyticSymbol::CoefficientMap num;
  num.emplace(e12, Matrix::Constant(1, 1, 2.0));
  num.emplace(e1, Matrix::Constant(1, 1, -1.0));
  num.emplace(e2, Matrix::Constant(1, 1, -1.0));
  ScalarPolynomial den{{o, 2.0}, {e1, -1.0}, {e2, -1.0}};
  return AnalyticSymbol::rational(AnalyticSymbol::polynomial(2, 1, 1, std::move(num)), std::move(den));
}

}  // namespace hardymod
