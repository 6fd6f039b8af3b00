#pragma once

#include <optional>

#include "hardymod/grid.hpp"
#include "hardymod/symbol.hpp"

namespace hardymod {

/// Default residual tolerance for operator identities.
inline constexpr double kDefaultTolerance = 1e-8;

/// Dense matrix of an operator between two truncated Hardy spaces, in the
/// grids' basis order.
class OperatorMatrix {
 public:
  OperatorMatrix(TruncationGrid domain, TruncationGrid codomain, Matrix m);

  const TruncationGrid& domain() const noexcept { return domain_; }
  const TruncationGrid& codomain() const noexcept { return codomain_; }
  const Matrix& matrix() const noexcept { return m_; }

  OperatorMatrix adjoint() const { return {codomain_, domain_, m_.adjoint()}; }
  HardyVector apply(const HardyVector& v) const;

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  TruncationGrid domain_;
  TruncationGrid codomain_;
  Matrix m_;
};

/// Compression of f -> Theta f to the grid: the domain is `grid` with
/// coeff_dim = symbol.cols(), the codomain the same monomials with
/// coeff_dim = symbol.rows(). Products beyond the caps are dropped.
OperatorMatrix mult_operator(const AnalyticSymbol& symbol, const TruncationGrid& grid);

/// Truncated coordinate shift M_{z_i} on the grid (overflow dropped).
Matrix shift_matrix(const TruncationGrid& grid, std::size_t i);

/// Product of truncated shifts M_z^k.
Matrix shift_power(const TruncationGrid& grid, const MultiIndex& k);

/// Per-variable margin that makes the columns of mult_operator exact:
/// the degree for polynomial symbols; for rational symbols the larger of the
/// numerator and denominator degrees, raised to `rational_margin` when given.
MultiIndex exactness_margin(const AnalyticSymbol& symbol, const MultiIndex& rational_margin);

/// Same as exactness_margin but at least 1 in every variable; residuals of
/// shift identities are evaluated below this margin.
MultiIndex core_margin(const AnalyticSymbol& symbol, const MultiIndex& rational_margin);

struct InnernessReport {
  double torus_deviation = 0.0;  ///< max over samples of ||Theta(z)^* Theta(z) - I||
  double isometry_defect = 0.0;  ///< ||W^*(M^* M - I)W|| on the input window
  bool isometry_exact = false;   ///< true when the window columns carry no truncation error
  bool evaluation_overflow = false;
  double tolerance = kDefaultTolerance;

  /// Torus deviation within tolerance, no overflow, and (when the window is
  /// exact) the isometry defect within tolerance.
  bool passed() const;
};

/// Samples Theta on the torus at the midpoints exp(2 pi i (j + 1/2) / N),
/// j = 0..N-1 per axis, and measures the truncated isometry defect.
InnernessReport innerness_check(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                                int torus_samples, double tol = kDefaultTolerance,
                                const MultiIndex& rational_margin = {});

}  // namespace hardymod
