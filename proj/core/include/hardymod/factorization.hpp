#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hardymod/criteria.hpp"
#include "hardymod/subspace.hpp"

namespace hardymod {

struct FactorizationOptions {
  double tol = kDefaultTolerance;
  MultiIndex rational_margin;
  int torus_samples = 32;

  SubmoduleOptions submodule() const { return {tol, rational_margin, torus_samples}; }
};

struct Division {
  AnalyticSymbol psi;
  double containment_residual = 0.0;   ///< ||(I - P_{S_Phi}) M_Theta W||
  double commutation_residual = 0.0;   ///< max_i ||W^*(X M_i - M_i X)W||, X = M_Phi^* M_Theta
  double reconstruction_residual = 0.0;///< ||(M_Theta - M_Phi M_Psi) W||
  InnernessReport psi_innerness;
};

/// Theta = Phi Psi with Psi read off the constant columns of M_Phi^* M_Theta.
/// Throws PreconditionFailed "not divisible" when S_Theta is not inside
/// S_Phi and "division not analytic" when X does not commute with the shifts.
Division divide_inner(const AnalyticSymbol& theta, const AnalyticSymbol& phi, const TruncationGrid& grid,
                      const FactorizationOptions& options = {});

/// M = S_Phi - S_Theta together with the symbols and residuals
/// "reconstruction", "containment", "analytic", "psi_isometry",
/// "invariance" (max_i ||(I - P_{M+S_Theta}) M_i P_M||) and "complement"
/// (||P_{Q_Theta - M} - P_{Q_Phi}||).
struct FactorizationWitness {
  AnalyticSymbol theta;
  AnalyticSymbol phi;
  AnalyticSymbol psi;
  TruncationGrid grid;
  Matrix m_basis;
  CriterionReport residuals;
};

FactorizationWitness invariant_subspace_from_factorization(const AnalyticSymbol& theta, const AnalyticSymbol& phi,
                                                           const TruncationGrid& grid,
                                                           const FactorizationOptions& options = {});

/// N = M + S_Theta: "sum_cross_commutator" is the cross-commutator residual of N,
/// "sum_beurling" the Beurling residual of the quotient by N, "agreement" is 0
/// when the two verdicts match. Throws PreconditionFailed when M leaves
/// Q_Theta or N is not shift invariant.
CriterionReport beurling_submodule_check(const Matrix& m_basis, const AnalyticSymbol& theta,
                                         const TruncationGrid& grid, const FactorizationOptions& options = {});

struct ConstancyReport {
  bool surjective = false;           ///< columns on the window span the codomain window
  bool constant_coefficients = false;///< every Theta_k with k != 0 is below tolerance
  double range_gap = 0.0;            ///< max distance of a codomain-window monomial from the range
  double max_nonconstant_coefficient = 0.0;
  /// surjective implies constant_coefficients.
  bool consistent() const { return !surjective || constant_coefficients; }
  bool unitary_constant() const { return surjective && constant_coefficients; }
};

ConstancyReport constancy_check(const AnalyticSymbol& theta, const TruncationGrid& grid,
                                const FactorizationOptions& options = {});

/// A pair of points of the open polydisc.
struct KernelPoint {
  std::vector<Complex> z;
  std::vector<Complex> w;

  /// Throws InvalidArgument unless both points lie strictly inside the polydisc.
  KernelPoint(std::vector<Complex> z, std::vector<Complex> w);
};

/// prod_i 1 / (1 - z_i conj(w_i)).
Complex szego_kernel(std::span<const Complex> z, std::span<const Complex> w);
/// (z1 (1 - z2 conj(w2)) conj(w1) + z2 conj(w2)) S(z, w): the kernel of {f : f(0) = 0}.
Complex vanishing_kernel(std::span<const Complex> z, std::span<const Complex> w);
/// sum over nonzero k <= caps of z^k conj(w)^k.
Complex vanishing_kernel_sum(std::span<const Complex> z, std::span<const Complex> w, const MultiIndex& caps);
/// z1 (1 - z2 conj(w2)) conj(w1) + z2 conj(w2).
Complex cofactor_kernel(std::span<const Complex> z, std::span<const Complex> w);

struct GramSearchOptions {
  std::size_t budget = 2000;
  double radius = 0.9;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Eigenvalues at or above -threshold never count as witnesses.
  double threshold = 1e-10;
};

struct GramWitness {
  bool found = false;
  std::size_t trial = 0;
  std::vector<std::vector<Complex>> points;
  Matrix gram;
  Eigen::VectorXd eigenvalues;
  double min_eigenvalue = 0.0;
};

/// Random point sets of size 2..4 in the polydisc of the given radius; the
/// most negative Gram eigenvalue of the cofactor kernel. Trial t draws from
/// its own stream, so the result does not depend on `jobs`.
GramWitness gram_negativity_search(const GramSearchOptions& options);

/// Sample interior pairs with coordinates of modulus <= radius.
std::vector<KernelPoint> sample_kernel_points(std::size_t count, double radius, std::uint64_t seed);

struct ConstantsQuotientReport {
  double kernel_max_deviation = 0.0;
  std::size_t kernel_pairs = 0;
  GramWitness gram;
  bool gram_inconclusive = true;
  bool phi_vanishes_at_origin = false;
  InnernessReport phi_innerness;
  Index rank_phi_range = 0;       ///< rank of the phi generators
  Index rank_phi_with_s = 0;      ///< rank after adding {f : f(0) = 0} on the window
  Index rank_s = 0;
  Index rank_h2 = 0;
  bool strict_inclusions = false; ///< phi H^2 < S < H^2
  double constants_beurling_residual = 0.0;
  CriterionReport summary;
};

struct ConstantsQuotientOptions {
  double tol = kDefaultTolerance;
  int torus_samples = 64;
  GramSearchOptions search;
};

ConstantsQuotientReport constants_quotient_suite(const TruncationGrid& grid, const std::vector<KernelPoint>& sample_pairs,
                                const ConstantsQuotientOptions& options = {});

}  // namespace hardymod
