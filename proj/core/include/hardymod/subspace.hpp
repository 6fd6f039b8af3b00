#pragma once

#include <optional>
#include <vector>

#include "hardymod/criteria.hpp"
#include "hardymod/operators.hpp"

namespace hardymod {

/// Column-orthonormal basis of a subspace of the truncated Hardy space, its
/// projection, and the core window on which shift identities are evaluated.
///
/// Monomials beyond the caps are treated as belonging to the submodule side:
/// a subspace S of the grid stands for S + (grid)^perp in H^2, so a quotient
/// Q = grid - S is an honest subspace of H^2 and the shifts stay isometric.
struct SubspaceData {
  TruncationGrid grid;
  Matrix basis;
  Matrix projection;
  /// Largest degree per variable of monomials in the core window.
  std::vector<int> core_window;
  /// Orthonormal basis of the part of S whose shifts must stay in S: the
  /// generators Theta z^k one degree below the input window, or S intersected
  /// with the core window for explicitly given subspaces.
  Matrix core_basis;
  /// Columns dropped while orthonormalizing.
  Index discarded = 0;

  Index dimension() const noexcept { return basis.cols(); }
  std::vector<Index> window_positions() const { return grid.window_positions(core_window); }
};

struct SubmoduleOptions {
  double tol = kDefaultTolerance;
  /// Margin for rational symbols (default 1 per variable).
  MultiIndex rational_margin;
  int torus_samples = 32;
};

/// Builds a SubspaceData from an orthonormal (or merely spanning) set of
/// columns. `core_margin` defaults to 1 per variable.
SubspaceData make_subspace(const TruncationGrid& grid, const Matrix& columns,
                           const MultiIndex& core_margin = {});

/// Span of Theta z^k for every input monomial k <= caps - deg(Theta) (rational
/// symbols: caps - margin), orthonormalized.
SubspaceData submodule_projection(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                                  const SubmoduleOptions& options = {});

/// S = {f : f(0) = 0}: every monomial except the constant one.
SubspaceData vanishing_at_origin(const TruncationGrid& grid);

/// S spanned by z^k with k >= g componentwise for some generator g.
SubspaceData monomial_ideal(const TruncationGrid& grid, const std::vector<MultiIndex>& generators);

/// Orthonormal basis of span(basis) intersected with the monomials of
/// degree <= window.
Matrix subspace_within_window(const TruncationGrid& grid, const Matrix& basis, const std::vector<int>& window);

/// Orthogonal complement inside the grid, same core window.
SubspaceData orthocomplement(const SubspaceData& s);

/// max_i ||(P_S M_i - M_i) B|| over the core basis B of S.
double submodule_residual(const SubspaceData& s);

/// Compressed shifts of a quotient module Q = S^perp.
struct CompressionTuple {
  /// C_{z_i} = P_Q M_{z_i}|_Q in the Q basis.
  std::vector<Matrix> operators;
  /// C_i = P_Q M_{z_i} P_Q on the full grid.
  std::vector<Matrix> extended;
  /// R_{z_i} = M_{z_i}|_S in the S basis (P_S M_{z_i}|_S).
  std::vector<Matrix> restricted;
};

struct QuotientData {
  SubspaceData submodule;
  SubspaceData quotient;
  CompressionTuple compressions;
  /// I_Q - C_{z_i}^* C_{z_i} in the Q basis.
  std::vector<Matrix> defects;
  /// Positive square roots D_{C_i}, eigenvalues clamped at 0.
  std::vector<Matrix> defect_roots;
  /// max_i ||(P_Q - C_i^* C_i) - P_Q M_i^* P_S M_i P_Q|| on the core window.
  double defect_identity_residual = 0.0;
  /// Smallest eigenvalue over all defects.
  double defect_min_eigenvalue = 0.0;

  const TruncationGrid& grid() const { return submodule.grid; }
  std::vector<Index> window_positions() const { return submodule.window_positions(); }
  /// P_Q - C_i^* C_i on the full grid.
  Matrix extended_defect(std::size_t i) const;
};

/// Throws PreconditionFailed when S is not shift invariant on the core window
/// (residual above tol) or a defect is not PSD to -1e-10.
QuotientData quotient_data(const SubspaceData& s, double tol = kDefaultTolerance);

/// Residual max_{i != j} ||W^*(P_Q - C_i^*C_i)(P_Q - C_j^*C_j)W||, named "beurling".
CriterionReport beurling_criterion(const QuotientData& q, double tol = kDefaultTolerance);

/// Residual max_{i != j} ||W^*(R_j^* R_i - R_i R_j^*)W||, named "cross_commutator".
CriterionReport cross_commutator_criterion(const SubspaceData& s, double tol = kDefaultTolerance);

/// Residual max_{i != j} ||W^* X_ij W||, X_ij = P_S M_i P_Q M_j^* P_S, named "xij".
CriterionReport xij_criterion(const QuotientData& q, double tol = kDefaultTolerance);

/// One (i, j, k_hat, l_hat) instance for the identity suite. k_hat must vanish
/// in slot i, l_hat in slot j, and both must be nonzero.
struct IdentityProbe {
  std::size_t i = 0;
  std::size_t j = 1;
  MultiIndex k_hat;
  MultiIndex l_hat;
};

/// All probes with i != j and k_hat, l_hat of total degree <= max_degree.
std::vector<IdentityProbe> default_probes(std::size_t variables, int max_degree = 2);

/// Residuals (on the core window):
///   xij                    max ||W^* X_ij W||, X_ij = P_S M_i P_Q M_j^* P_S
///   defect_identity        as in QuotientData
///   commutator_identity    ||[C_i, C^{*k}] - P_Q M^{*k} P_S M_i P_Q||
///   commutator_domination  max(0, -lambda_min(D^2_{C_i} - K^*K)), K = [C_i, C^{*k}]
///   zero_products          the three zero products (only when the Beurling verdict holds)
///   reduces                ||P_Q A_t - A_t P_Q||, A_t = M_t^* P_S M_t
/// The raw minimum eigenvalue is kept as diagnostic "commutator_domination_min_eigenvalue".
CriterionReport identity_suite(const QuotientData& q, const std::vector<IdentityProbe>& probes,
                               double tol = kDefaultTolerance);
CriterionReport identity_suite(const QuotientData& q, double tol = kDefaultTolerance);

/// Realizes [C_i, C^{*k}] = X D_{C_i} with X = [C_i, C^{*k}] pinv(D_{C_i}).
struct CommutatorFactor {
  Matrix x;              ///< in the Q basis
  double norm = 0.0;     ///< should be <= 1
  double residual = 0.0; ///< ||[C_i, C^{*k}] - X D_{C_i}||
};
CommutatorFactor commutator_factor(const QuotientData& q, std::size_t i, const MultiIndex& k_hat);

}  // namespace hardymod
