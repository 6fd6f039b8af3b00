#pragma once

#include <span>
#include <vector>

#include "hardymod/grid.hpp"

namespace hardymod::linalg {

/// Relative singular-value cutoff used when orthonormalizing.
inline constexpr double kRankTolerance = 1e-10;

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& a);

/// Smallest eigenvalue of the Hermitian part of a; +inf for empty matrices.
double min_eigenvalue(const Matrix& a);

struct Orthonormalized {
  Matrix basis;        ///< column-orthonormal, spans the numerical range
  Index discarded = 0; ///< columns dropped as numerically dependent
};

/// Orthonormal basis of the column space, keeping sigma > rel_tol * sigma_max.
Orthonormalized orthonormal_columns(const Matrix& a, double rel_tol = kRankTolerance);

/// Orthonormal basis of the orthogonal complement of the span of an
/// orthonormal basis inside C^dim.
Matrix orthocomplement(const Matrix& orthonormal_basis, Index dim);

/// Principal square root of a PSD matrix, clamping negative eigenvalues at 0.
Matrix psd_sqrt(const Matrix& a);

/// Numerical rank with the same relative cutoff as orthonormal_columns.
Index rank(const Matrix& a, double rel_tol = kRankTolerance);

/// Coordinate injection of the listed basis positions into C^dim.
Matrix selector(std::span<const Index> positions, Index dim);

/// w^* a w for the coordinate window w.
Matrix compress(const Matrix& a, std::span<const Index> positions);

}  // namespace hardymod::linalg
