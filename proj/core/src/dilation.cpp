#include "hardymod/dilation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "hardymod/error.hpp"
#include "hardymod/linalg.hpp"

namespace hardymod {

namespace {

constexpr double kPsdFloor = -1e-10;

Matrix alternating_defect(const std::vector<Matrix>& ops, Index dim) {
  const std::size_t n = ops.size();
  if (n >= 63) throw Error(ErrorKind::InvalidArgument, "too many operators for the subset sum");
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Matrix tf = Matrix::Identity(dim, dim);
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::uint64_t{1} << j)) tf = tf * ops[j];
    }
    const double sign = std::popcount(mask) % 2 == 0 ? 1.0 : -1.0;
    sum += sign * (tf * tf.adjoint());
  }
  return sum;
}

double annihilation_residual(const std::vector<Matrix>& ops) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Index d = ops[i].rows();
    const Matrix di = Matrix::Identity(d, d) - ops[i].adjoint() * ops[i];
    for (std::size_t j = 0; j < ops.size(); ++j) {
      if (i == j) continue;
      const Matrix dj = Matrix::Identity(d, d) - ops[j].adjoint() * ops[j];
      worst = std::max(worst, linalg::spectral_norm(di * dj));
    }
  }
  return worst;
}

double pureness_indicator(const std::vector<Matrix>& ops, double tol, double& max_radius) {
  double indicator = 0.0;
  max_radius = 0.0;
  for (const auto& t : ops) {
    const auto v = pureness_check(t, 256, tol);
    max_radius = std::max(max_radius, v.spectral_radius);
    if (!v.pure) indicator = 1.0;
  }
  return indicator;
}

}  // namespace

ContractionTuple::ContractionTuple(std::vector<Matrix> operators, double tol) : ops_(std::move(operators)) {
  if (ops_.empty()) throw Error(ErrorKind::InvalidArgument, "contraction tuple needs at least one operator");
  dim_ = ops_.front().rows();
  for (const auto& t : ops_) {
    if (t.rows() != dim_ || t.cols() != dim_) {
      throw Error(ErrorKind::DimensionMismatch, "tuple operators must be square of a common size");
    }
  }
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const double norm = linalg::spectral_norm(ops_[i]);
    if (norm > 1.0 + tol) {
      throw Error(ErrorKind::PreconditionFailed,
                  "operator " + std::to_string(i + 1) + " is not a contraction (norm " + std::to_string(norm) + ")");
    }
    for (std::size_t j = i + 1; j < ops_.size(); ++j) {
      const double comm = linalg::spectral_norm(ops_[i] * ops_[j] - ops_[j] * ops_[i]);
      if (comm > tol) {
        throw Error(ErrorKind::PreconditionFailed, "non-commuting input: operators " + std::to_string(i + 1) + " and " +
                                                       std::to_string(j + 1) + " (commutator norm " +
                                                       std::to_string(comm) + ")");
      }
    }
  }
}

Matrix ContractionTuple::subset_product(std::uint64_t mask) const {
  Matrix out = Matrix::Identity(dim_, dim_);
  for (std::size_t j = 0; j < ops_.size(); ++j) {
    if (mask & (std::uint64_t{1} << j)) out = out * ops_[j];
  }
  return out;
}

Matrix ContractionTuple::adjoint_power(const MultiIndex& k) const {
  if (k.size() != ops_.size()) throw Error(ErrorKind::DimensionMismatch, "exponent length differs from tuple size");
  Matrix out = Matrix::Identity(dim_, dim_);
  for (std::size_t t = 0; t < k.size(); ++t) {
    for (int p = 0; p < k[t]; ++p) out = ops_[t].adjoint() * out;
  }
  return out;
}

BrehmerDefect brehmer_defect(const ContractionTuple& t) {
  BrehmerDefect out;
  out.defect_sq = alternating_defect(t.operators(), t.dimension());
  out.defect_sq = 0.5 * (out.defect_sq + out.defect_sq.adjoint());
  out.min_eigenvalue = t.dimension() == 0 ? 0.0 : linalg::min_eigenvalue(out.defect_sq);
  out.psd = out.min_eigenvalue >= kPsdFloor;
  out.defect_root = linalg::psd_sqrt(out.defect_sq);
  out.defect_space_basis = linalg::orthonormal_columns(out.defect_root).basis;
  return out;
}

std::string to_string(PurenessRule rule) {
  switch (rule) {
    case PurenessRule::Nilpotent: return "nilpotent";
    case PurenessRule::SpectralRadius: return "spectral_radius";
    case PurenessRule::PowerNorm: return "power_norm";
    case PurenessRule::NotPure: return "not_pure";
  }
  return "unknown";
}

PurenessVerdict pureness_check(const Matrix& t, int max_power, double tol) {
  PurenessVerdict v;
  const Index dim = t.rows();
  if (dim == 0) {
    v.pure = true;
    v.rule = PurenessRule::Nilpotent;
    return v;
  }
  Matrix p = Matrix::Identity(dim, dim);
  for (Index s = 0; s < dim; ++s) p = p * t;
  const double scale = std::max(1.0, std::pow(linalg::spectral_norm(t), static_cast<double>(dim)));
  if (linalg::spectral_norm(p) <= 1e-13 * scale) {
    v.pure = true;
    v.rule = PurenessRule::Nilpotent;
    return v;
  }

  Eigen::ComplexEigenSolver<Matrix> es(t, false);
  v.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();

  // (T^*)^max_power by repeated squaring.
  Matrix result = Matrix::Identity(dim, dim);
  Matrix base = t.adjoint();
  for (int e = std::max(max_power, 1); e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    base = base * base;
  }
  v.power_norm = linalg::spectral_norm(result);

  if (v.spectral_radius < 1.0 - tol) {
    v.pure = true;
    v.rule = PurenessRule::SpectralRadius;
  } else if (v.power_norm <= tol) {
    v.pure = true;
    v.rule = PurenessRule::PowerNorm;
  }
  return v;
}

DilationData canonical_dilation(const ContractionTuple& t, const MultiIndex& caps, double tol) {
  if (caps.size() != t.size()) throw Error(ErrorKind::DimensionMismatch, "grid caps length differs from tuple size");
  const BrehmerDefect defect = brehmer_defect(t);
  if (!defect.psd) {
    throw Error(ErrorKind::PreconditionFailed,
                "Brehmer precondition failed (defect min eigenvalue " + std::to_string(defect.min_eigenvalue) + ")");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!pureness_check(t[i], 256, tol).pure) {
      throw Error(ErrorKind::PreconditionFailed, "pureness precondition failed (operator " + std::to_string(i + 1) + ")");
    }
  }
  const Matrix& v = defect.defect_space_basis;
  const Index r = v.cols();
  if (r == 0) throw Error(ErrorKind::NumericalFailure, "defect space is trivial");

  DilationData out{TruncationGrid(caps, static_cast<int>(r)), defect.defect_sq, v, Matrix(), 0.0, 0.0, 0.0, true};
  const TruncationGrid& grid = out.grid;
  const Index dim = t.dimension();
  const Matrix vd = v.adjoint() * defect.defect_root;

  // T^{*k} per monomial, built from the predecessor k - e_i.
  std::vector<Matrix> powers(static_cast<std::size_t>(grid.monomial_count()));
  out.pi = Matrix::Zero(grid.size(), dim);
  for (const auto& k : grid.monomials()) {
    const auto pos = static_cast<std::size_t>(grid.monomial_position(k));
    if (k.is_zero()) {
      powers[pos] = Matrix::Identity(dim, dim);
    } else {
      std::size_t i = 0;
      while (k[i] == 0) ++i;
      const auto prev = static_cast<std::size_t>(grid.monomial_position(k.with(i, k[i] - 1)));
      powers[pos] = t[i].adjoint() * powers[prev];
    }
    const Matrix block = vd * powers[pos];
    out.pi.middleRows(grid.index(k, 0), r) = block;
    bool on_cap = false;
    for (std::size_t s = 0; s < k.size(); ++s) on_cap = on_cap || k[s] == caps[s];
    if (on_cap) {
      const double nb = linalg::spectral_norm(block);
      out.tail_mass += nb * nb;
    }
  }
  out.grid_sufficient = out.tail_mass <= tol;
  out.isometry_residual = linalg::spectral_norm(out.pi.adjoint() * out.pi - Matrix::Identity(dim, dim));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Matrix lhs = out.pi * t[i].adjoint();
    const Matrix rhs = shift_matrix(grid, i).adjoint() * out.pi;
    out.intertwining_residual = std::max(out.intertwining_residual, linalg::spectral_norm(lhs - rhs));
  }
  return out;
}

CriterionReport model_correspondence(const QuotientData& q, double tol) {
  CriterionReport r;
  r.tolerance = tol;
  const std::size_t n = q.grid().variables();
  const auto window = q.window_positions();
  const auto& ext = q.compressions.extended;
  const Index dim = q.grid().size();

  const Matrix sum = alternating_defect(ext, dim);
  // Off Q the extended operators vanish, so only the F = {} term survives
  // there; take the sum relative to P_Q.
  const Matrix brehmer = sum - (Matrix::Identity(dim, dim) - q.quotient.projection);
  const double min_eig = linalg::min_eigenvalue(linalg::compress(brehmer, window));
  r.add("brehmer", std::max(0.0, -min_eig));
  r.diagnostics["brehmer_min_eigenvalue"] = window.empty() ? 0.0 : min_eig;

  double radius = 0.0;
  r.add("pureness", pureness_indicator(q.compressions.operators, tol, radius));
  r.diagnostics["spectral_radius_max"] = radius;

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Matrix prod = q.extended_defect(i) * q.extended_defect(j);
      worst = std::max(worst, linalg::spectral_norm(linalg::compress(prod, window)));
    }
  }
  r.add("annihilation", worst);
  r.add("condition_b", std::max({r.residual("brehmer"), r.residual("pureness"), r.residual("annihilation")}));
  return r;
}

CriterionReport model_correspondence(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                                     const SubmoduleOptions& options) {
  const SubspaceData s = submodule_projection(symbol, grid, options);
  return model_correspondence(quotient_data(s, options.tol), options.tol);
}

CriterionReport model_correspondence(const ContractionTuple& t, double tol) {
  CriterionReport r;
  r.tolerance = tol;
  const BrehmerDefect defect = brehmer_defect(t);
  r.add("brehmer", std::max(0.0, -defect.min_eigenvalue));
  r.diagnostics["brehmer_min_eigenvalue"] = defect.min_eigenvalue;
  double radius = 0.0;
  r.add("pureness", pureness_indicator(t.operators(), tol, radius));
  r.diagnostics["spectral_radius_max"] = radius;
  r.add("annihilation", annihilation_residual(t.operators()));
  r.add("condition_b", std::max({r.residual("brehmer"), r.residual("pureness"), r.residual("annihilation")}));
  return r;
}

Matrix jordan_block(Index dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (Index i = 0; i + 1 < dim; ++i) n(i, i + 1) = 1.0;
  return n;
}

ContractionTuple random_nilpotent_brehmer_pair(std::uint64_t seed, Index dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Matrix n = jordan_block(dim);
  std::vector<Matrix> powers{n};
  for (Index p = 2; p < dim; ++p) powers.push_back(powers.back() * n);

  auto draw = [&] {
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& p : powers) m += Complex(normal(rng), normal(rng)) * p;
    return m;
  };
  while (true) {
    const Matrix p = draw();
    const Matrix q = draw();
    for (double scale = 1.0; scale > 1e-3; scale *= 0.8) {
      std::vector<Matrix> ops{scale * p, scale * q};
      if (linalg::spectral_norm(ops[0]) > 1.0 || linalg::spectral_norm(ops[1]) > 1.0) continue;
      if (linalg::min_eigenvalue(alternating_defect(ops, dim)) < 0.0) continue;
      return ContractionTuple(std::move(ops));
    }
  }
}

}  // namespace hardymod
