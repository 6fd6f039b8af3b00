#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hardymod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Exponent tuple k = (k_1, ..., k_n) of a monomial z^k.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(std::size_t n);
  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  std::span<const int> entries() const noexcept { return entries_; }

  int total_degree() const noexcept;
  bool is_zero() const noexcept;

  /// Componentwise k <= caps.
  bool fits_within(const MultiIndex& caps) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; throws if any component would go negative.
  MultiIndex operator-(const MultiIndex& other) const;
  MultiIndex with(std::size_t i, int value) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// True when a precedes b in the graded lexicographic basis order: lower total
/// degree first, then larger leading exponents first.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

/// Componentwise max(caps - margin, lower) with lower = -1 meaning "empty".
/// Window components may be negative, in which case the window is empty.
std::vector<int> shrink(const MultiIndex& caps, const MultiIndex& margin);

/// Finite monomial basis of H^2_E(D^n): monomials z^k with k_i <= caps_i,
/// tensored with an m-dimensional coefficient space. Basis position of
/// (k, channel) is monomial_position(k) * m + channel.
class TruncationGrid {
 public:
  TruncationGrid(MultiIndex caps, int coeff_dim = 1);

  std::size_t variables() const noexcept { return caps_.size(); }
  const MultiIndex& caps() const noexcept { return caps_; }
  int coeff_dim() const noexcept { return coeff_dim_; }

  Index monomial_count() const noexcept;
  Index size() const noexcept { return monomial_count() * coeff_dim_; }

  /// Monomials in basis order.
  const std::vector<MultiIndex>& monomials() const noexcept;
  Index monomial_position(const MultiIndex& k) const;
  Index index(const MultiIndex& k, int channel = 0) const;
  std::pair<MultiIndex, int> entry(Index position) const;
  bool contains(const MultiIndex& k) const { return k.fits_within(caps_); }

  /// Same monomials, different coefficient dimension.
  TruncationGrid with_coeff_dim(int m) const { return TruncationGrid(caps_, m); }

  /// Basis positions (all channels) of monomials with k_i <= window_i.
  std::vector<Index> window_positions(std::span<const int> window) const;
  std::vector<Index> window_positions(const MultiIndex& window) const {
    return window_positions(window.entries());
  }

  friend bool operator==(const TruncationGrid& a, const TruncationGrid& b) {
    return a.caps_ == b.caps_ && a.coeff_dim_ == b.coeff_dim_;
  }

 private:
  struct Tables;
  MultiIndex caps_;
  int coeff_dim_;
  std::shared_ptr<const Tables> tables_;
};

/// Ordered (monomial, channel) pairs; the grid's enumeration exposed as data.
std::vector<std::pair<MultiIndex, int>> enumerate_basis(const TruncationGrid& grid);

/// Element of the truncated Hardy space, stored by its monomial coefficients.
class HardyVector {
 public:
  HardyVector(TruncationGrid grid, Vector coefficients);
  static HardyVector monomial(const TruncationGrid& grid, const MultiIndex& k,
                              int channel = 0);

  const TruncationGrid& grid() const noexcept { return grid_; }
  const Vector& coefficients() const noexcept { return coeffs_; }
  Complex coefficient(const MultiIndex& k, int channel = 0) const;

  /// Hardy norm; the monomials are orthonormal so this is the l2 norm.
  double norm() const { return coeffs_.norm(); }
  Complex inner(const HardyVector& other) const;

  /// Point evaluation f(z) in the interior of the polydisc, one value per channel.
  Vector evaluate(std::span<const Complex> z) const;

 private:
  TruncationGrid grid_;
  Vector coeffs_;
};

}  // namespace hardymod
