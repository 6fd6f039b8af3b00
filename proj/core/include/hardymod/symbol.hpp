#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>

#include "hardymod/grid.hpp"

namespace hardymod {

using ScalarPolynomial = std::map<MultiIndex, Complex>;

class AnalyticSymbol;

/// Closed form numerator / denominator of a rational symbol.
struct RationalForm {
  std::shared_ptr<const AnalyticSymbol> numerator;
  ScalarPolynomial denominator;
};

/// Matrix-valued analytic function Theta(z) = sum_k Theta_k z^k with
/// Theta_k of shape rows x cols (rows = dim E, cols = dim E_*).
///
/// Polynomial symbols carry their full coefficient table. Rational symbols
/// keep the closed form and carry a Taylor table only up to the caps they
/// were expanded to; use expanded_to() before reading coefficients.
class AnalyticSymbol {
 public:
  using CoefficientMap = std::map<MultiIndex, Matrix>;

  static AnalyticSymbol polynomial(std::size_t variables, Index rows, Index cols,
                                   CoefficientMap coeffs);
  static AnalyticSymbol monomial(const MultiIndex& k, int coeff_dim = 1,
                                 Complex scale = 1.0);
  static AnalyticSymbol constant(std::size_t variables, Matrix value);
  static AnalyticSymbol rational(const AnalyticSymbol& numerator,
                                 ScalarPolynomial denominator);

  /// (z_v - a) / (1 - conj(a) z_v) in n variables.
  static AnalyticSymbol blaschke(std::size_t variables, std::size_t v, Complex a);

  std::size_t variables() const noexcept { return variables_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool is_polynomial() const noexcept { return !rational_; }
  const std::optional<RationalForm>& rational_form() const noexcept { return rational_; }

  /// Known Taylor coefficients (complete for polynomials).
  const CoefficientMap& coefficients() const noexcept { return coeffs_; }
  /// Caps the Taylor table of a rational symbol covers; nullopt for polynomials.
  const std::optional<MultiIndex>& expansion_caps() const noexcept { return expanded_caps_; }
  Matrix coefficient(const MultiIndex& k) const;

  /// Per-variable maximal exponent in the support. Polynomials only.
  MultiIndex degree() const;

  /// Theta(z). For rational symbols the closed form is used.
  Matrix evaluate(std::span<const Complex> z) const;

  /// Symbol whose coefficient table covers every k <= caps.
  AnalyticSymbol expanded_to(const MultiIndex& caps) const;

  /// Drops coefficients with max |entry| <= tol.
  AnalyticSymbol pruned(double tol) const;

 private:
  friend AnalyticSymbol rational_taylor(const AnalyticSymbol&, const ScalarPolynomial&,
                                        const MultiIndex&);

  AnalyticSymbol(std::size_t variables, Index rows, Index cols)
      : variables_(variables), rows_(rows), cols_(cols) {}

  std::size_t variables_ = 0;
  Index rows_ = 0;
  Index cols_ = 0;
  CoefficientMap coeffs_;
  std::optional<RationalForm> rational_;
  std::optional<MultiIndex> expanded_caps_;
};

/// Pointwise product A(z) B(z). Polynomial if both factors are.
AnalyticSymbol operator*(const AnalyticSymbol& a, const AnalyticSymbol& b);

Complex evaluate(const ScalarPolynomial& p, std::span<const Complex> z);
ScalarPolynomial multiply(const ScalarPolynomial& a, const ScalarPolynomial& b);

/// Taylor coefficients of numerator / denominator for every k <= caps, from
/// den * q = num matched coefficientwise in graded order.
AnalyticSymbol rational_taylor(const AnalyticSymbol& numerator,
                               const ScalarPolynomial& denominator,
                               const MultiIndex& caps);

/// phi(z) = (2 z1 z2 - z1 - z2) / (2 - z1 - z2), the two-variable inner
/// function whose range sits strictly inside {f : f(0,0) = 0}.
AnalyticSymbol phi_symbol();

}  // namespace hardymod
