#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardymod/criteria.hpp"
#include "hardymod/subspace.hpp"

namespace hardymod {

/// Commuting contractions T_1..T_n on C^dim.
class ContractionTuple {
 public:
  static constexpr double kValidationTolerance = 1e-10;

  /// Throws DimensionMismatch for ragged or non-square input and
  /// PreconditionFailed when the matrices do not commute or are not
  /// contractions.
  explicit ContractionTuple(std::vector<Matrix> operators, double tol = kValidationTolerance);

  std::size_t size() const noexcept { return ops_.size(); }
  Index dimension() const noexcept { return dim_; }
  const Matrix& operator[](std::size_t i) const { return ops_.at(i); }
  const std::vector<Matrix>& operators() const noexcept { return ops_; }

  /// T_F = prod_{j in F} T_j, F given as a bit mask.
  Matrix subset_product(std::uint64_t mask) const;
  /// T^{*k} = prod_t (T_t^*)^{k_t}.
  Matrix adjoint_power(const MultiIndex& k) const;

 private:
  std::vector<Matrix> ops_;
  Index dim_ = 0;
};

struct BrehmerDefect {
  /// sum_F (-1)^|F| T_F T_F^*
  Matrix defect_sq;
  bool psd = false;
  double min_eigenvalue = 0.0;
  /// Positive square root D_{T^*}.
  Matrix defect_root;
  /// Orthonormal basis of the range of the square root.
  Matrix defect_space_basis;
};

BrehmerDefect brehmer_defect(const ContractionTuple& t);

enum class PurenessRule { Nilpotent, SpectralRadius, PowerNorm, NotPure };

std::string to_string(PurenessRule rule);

struct PurenessVerdict {
  bool pure = false;
  PurenessRule rule = PurenessRule::NotPure;
  double spectral_radius = 0.0;
  double power_norm = 0.0;  ///< ||(T^*)^max_power||
};

/// Decides whether T^{*m} -> 0. Nilpotency is tried first, then the spectral
/// radius, then the norm of a high power.
PurenessVerdict pureness_check(const Matrix& t, int max_power = 256, double tol = 1e-10);

/// Isometry Pi : C^dim -> truncated H^2 with coefficients in the defect
/// space, (Pi h)_k = D T^{*k} h written in the defect-space basis.
struct DilationData {
  TruncationGrid grid;
  Matrix defect_sq;
  Matrix defect_space_basis;
  Matrix pi;
  double isometry_residual = 0.0;      ///< ||Pi^* Pi - I||
  double intertwining_residual = 0.0;  ///< max_i ||Pi T_i^* - M_{z_i}^* Pi||
  double tail_mass = 0.0;              ///< sum over k on the caps of ||D T^{*k}||^2
  bool grid_sufficient = true;         ///< tail_mass <= tol
};

/// `caps` gives the degree caps; the coefficient dimension is that of the
/// defect space. Throws PreconditionFailed when T is not Brehmer or not pure.
DilationData canonical_dilation(const ContractionTuple& t, const MultiIndex& caps,
                                double tol = kDefaultTolerance);

/// Extracted model tuple of a quotient module together with the checks of
/// the model correspondence. Residuals: "brehmer" (negative part of the defect
/// sum), "pureness" (0 when every entry is pure, else 1) and "annihilation"
/// max_{i != j} ||(I - T_i^*T_i)(I - T_j^*T_j)|| on the core window, and
/// "condition_b", the largest of the three.
CriterionReport model_correspondence(const QuotientData& q, double tol = kDefaultTolerance);

/// Symbol direction: builds Q_Theta on the grid first.
CriterionReport model_correspondence(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                                     const SubmoduleOptions& options = {});

/// Tuple direction, same residuals.
CriterionReport model_correspondence(const ContractionTuple& t, double tol = kDefaultTolerance);

/// 4x4 upper Jordan block with ones on the superdiagonal.
Matrix jordan_block(Index dim = 4);

/// (p(N), q(N)) with p, q random polynomials without constant term in the
/// Jordan block N, scaled down until the pair is a Brehmer tuple.
ContractionTuple random_nilpotent_brehmer_pair(std::uint64_t seed, Index dim = 4);

}  // namespace hardymod
