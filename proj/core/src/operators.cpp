#include "hardymod/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardymod/error.hpp"
#include "hardymod/linalg.hpp"

namespace hardymod {

OperatorMatrix::OperatorMatrix(TruncationGrid domain, TruncationGrid codomain, Matrix m)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), m_(std::move(m)) {
  if (m_.rows() != codomain_.size() || m_.cols() != domain_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "operator matrix shape does not match its grids");
  }
}

HardyVector OperatorMatrix::apply(const HardyVector& v) const {
  if (!(v.grid() == domain_)) throw Error(ErrorKind::DimensionMismatch, "vector is not in the operator domain");
  return HardyVector(codomain_, m_ * v.coefficients());
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.domain_ == b.codomain_)) throw Error(ErrorKind::DimensionMismatch, "operators do not compose");
  return OperatorMatrix(b.domain_, a.codomain_, a.m_ * b.m_);
}

OperatorMatrix mult_operator(const AnalyticSymbol& symbol, const TruncationGrid& grid) {
  if (symbol.variables() != grid.variables()) {
    throw Error(ErrorKind::DimensionMismatch, "symbol and grid have different numbers of variables");
  }
  if (symbol.cols() != grid.coeff_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "symbol column dimension differs from the domain coefficient dimension");
  }
  const AnalyticSymbol full = symbol.expanded_to(grid.caps());
  const TruncationGrid codomain = grid.with_coeff_dim(static_cast<int>(symbol.rows()));
  const Index m_in = grid.coeff_dim();
  const Index m_out = codomain.coeff_dim();

  Matrix m = Matrix::Zero(codomain.size(), grid.size());
  for (const auto& k : grid.monomials()) {
    const Index col = grid.monomial_position(k) * m_in;
    for (const auto& [j, coeff] : full.coefficients()) {
      const MultiIndex target = k + j;
      if (!target.fits_within(grid.caps())) continue;
      m.block(codomain.monomial_position(target) * m_out, col, m_out, m_in) += coeff;
    }
  }
  return OperatorMatrix(grid, codomain, std::move(m));
}

Matrix shift_matrix(const TruncationGrid& grid, std::size_t i) {
  if (i >= grid.variables()) throw Error(ErrorKind::InvalidArgument, "shift variable out of range");
  const Index m = grid.coeff_dim();
  Matrix s = Matrix::Zero(grid.size(), grid.size());
  for (const auto& k : grid.monomials()) {
    if (k[i] >= grid.caps()[i]) continue;
    const Index from = grid.monomial_position(k) * m;
    const Index to = grid.monomial_position(k.with(i, k[i] + 1)) * m;
    for (Index c = 0; c < m; ++c) s(to + c, from + c) = 1.0;
  }
  return s;
}

Matrix shift_power(const TruncationGrid& grid, const MultiIndex& k) {
  if (k.size() != grid.variables()) throw Error(ErrorKind::DimensionMismatch, "shift exponent has wrong length");
  const Index m = grid.coeff_dim();
  Matrix s = Matrix::Zero(grid.size(), grid.size());
  for (const auto& l : grid.monomials()) {
    const MultiIndex target = l + k;
    if (!target.fits_within(grid.caps())) continue;
    const Index from = grid.monomial_position(l) * m;
    const Index to = grid.monomial_position(target) * m;
    for (Index c = 0; c < m; ++c) s(to + c, from + c) = 1.0;
  }
  return s;
}

MultiIndex exactness_margin(const AnalyticSymbol& symbol, const MultiIndex& rational_margin) {
  if (symbol.is_polynomial()) return symbol.degree();
  if (rational_margin.size() != 0 && rational_margin.size() != symbol.variables()) {
    throw Error(ErrorKind::DimensionMismatch, "margin length differs from symbol");
  }
  const auto& form = *symbol.rational_form();
  const MultiIndex num = form.numerator->degree();
  std::vector<int> d(num.entries().begin(), num.entries().end());
  for (const auto& [k, c] : form.denominator) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::max(d[i], k[i]);
  }
  if (rational_margin.size() != 0) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::max(d[i], rational_margin[i]);
  }
  return MultiIndex(std::move(d));
}

MultiIndex core_margin(const AnalyticSymbol& symbol, const MultiIndex& rational_margin) {
  const MultiIndex exact = exactness_margin(symbol, rational_margin);
  std::vector<int> out(exact.entries().begin(), exact.entries().end());
  for (int& e : out) e = std::max(e, 1);
  return MultiIndex(std::move(out));
}

bool InnernessReport::passed() const {
  if (evaluation_overflow) return false;
  if (!(torus_deviation <= tolerance)) return false;
  return !isometry_exact || isometry_defect <= tolerance;
}

InnernessReport innerness_check(const AnalyticSymbol& symbol, const TruncationGrid& grid, int torus_samples,
                                double tol, const MultiIndex& rational_margin) {
  if (torus_samples < 1) throw Error(ErrorKind::InvalidArgument, "torus_samples must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  InnernessReport report;
  report.tolerance = tol;

  const std::size_t n = symbol.variables();
  const Matrix identity = Matrix::Identity(symbol.cols(), symbol.cols());
  std::vector<Complex> roots(static_cast<std::size_t>(torus_samples));
  for (int j = 0; j < torus_samples; ++j) {
    roots[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / torus_samples);
  }

  // Denominators this small on the torus mean the closed form is not usable there.
  constexpr double kOverflowFloor = 1e-12;
  std::vector<int> counter(n, 0);
  std::vector<Complex> z(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) z[i] = roots[static_cast<std::size_t>(counter[i])];
    bool overflow = false;
    if (const auto& rf = symbol.rational_form()) {
      overflow = std::abs(evaluate(rf->denominator, z)) < kOverflowFloor;
    }
    if (!overflow) {
      const Matrix value = symbol.evaluate(z);
      overflow = !value.allFinite();
      if (!overflow) {
        report.torus_deviation =
            std::max(report.torus_deviation, linalg::spectral_norm(value.adjoint() * value - identity));
      }
    }
    report.evaluation_overflow = report.evaluation_overflow || overflow;

    std::size_t i = 0;
    while (i < n && ++counter[i] == torus_samples) counter[i++] = 0;
    if (i == n) break;
  }

  const TruncationGrid domain = grid.with_coeff_dim(static_cast<int>(symbol.cols()));
  const MultiIndex margin = exactness_margin(symbol, rational_margin);
  const auto window = domain.window_positions(shrink(domain.caps(), margin));
  report.isometry_exact = symbol.is_polynomial();
  if (!window.empty()) {
    const Matrix cols = mult_operator(symbol, domain).matrix()(Eigen::all, window);
    report.isometry_defect = linalg::spectral_norm(
        cols.adjoint() * cols - Matrix::Identity(cols.cols(), cols.cols()));
  }
  return report;
}

}  // namespace hardymod
