#include "hardymod/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "hardymod/error.hpp"
#include "hardymod/linalg.hpp"

namespace hardymod {

namespace {

InnernessReport require_inner(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                              const FactorizationOptions& options, const char* name) {
  const auto report = innerness_check(symbol, grid.with_coeff_dim(static_cast<int>(symbol.cols())),
                                      options.torus_samples, options.tol, options.rational_margin);
  if (!report.passed()) {
    throw Error(ErrorKind::PreconditionFailed, std::string("innerness failure for ") + name + ": torus deviation " +
                                                   std::to_string(report.torus_deviation));
  }
  return report;
}

Matrix rectangular_compress(const Matrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  return a(rows, cols);
}

std::vector<Complex> random_point(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> z(n);
  for (auto& c : z) {
    const double rho = radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    c = std::polar(rho, angle);
  }
  return z;
}

}  // namespace

Division divide_inner(const AnalyticSymbol& theta, const AnalyticSymbol& phi, const TruncationGrid& grid,
                      const FactorizationOptions& options) {
  if (theta.variables() != grid.variables() || phi.variables() != grid.variables()) {
    throw Error(ErrorKind::DimensionMismatch, "symbols and grid have different numbers of variables");
  }
  if (theta.rows() != phi.rows()) throw Error(ErrorKind::DimensionMismatch, "theta and phi have different target spaces");
  require_inner(theta, grid, options, "theta");
  require_inner(phi, grid, options, "phi");

  const TruncationGrid target = grid.with_coeff_dim(static_cast<int>(theta.rows()));
  const TruncationGrid source = grid.with_coeff_dim(static_cast<int>(theta.cols()));
  const TruncationGrid middle = grid.with_coeff_dim(static_cast<int>(phi.cols()));

  const SubspaceData s_phi = submodule_projection(phi, target, options.submodule());
  const Matrix m_theta = mult_operator(theta, source).matrix();
  const Matrix m_phi = mult_operator(phi, middle).matrix();
  const MultiIndex margin = exactness_margin(theta, options.rational_margin);
  const auto window = source.window_positions(shrink(grid.caps(), margin));

  Division out{AnalyticSymbol::constant(grid.variables(), Matrix::Zero(phi.cols(), theta.cols())), 0.0, 0.0, 0.0, {}};
  const Matrix cols = m_theta(Eigen::all, window);
  out.containment_residual = linalg::spectral_norm(cols - s_phi.projection * cols);
  if (!(out.containment_residual <= options.tol)) {
    throw Error(ErrorKind::PreconditionFailed,
                "not divisible: containment residual " + std::to_string(out.containment_residual));
  }

  const Matrix x = m_phi.adjoint() * m_theta;
  std::vector<int> inner = shrink(grid.caps(), margin);
  for (int& e : inner) e -= 1;
  const auto in_cols = source.window_positions(inner);
  const auto in_rows = middle.window_positions(inner);
  for (std::size_t i = 0; i < grid.variables(); ++i) {
    const Matrix comm = x * shift_matrix(source, i) - shift_matrix(middle, i) * x;
    out.commutation_residual =
        std::max(out.commutation_residual, linalg::spectral_norm(rectangular_compress(comm, in_rows, in_cols)));
  }
  if (!(out.commutation_residual <= options.tol)) {
    throw Error(ErrorKind::PreconditionFailed,
                "division not analytic: shift commutation residual " + std::to_string(out.commutation_residual));
  }

  AnalyticSymbol::CoefficientMap coeffs;
  const Index f = phi.cols();
  const Index e = theta.cols();
  for (const auto& k : middle.monomials()) {
    Matrix block = x.block(middle.index(k, 0), source.index(MultiIndex::zero(grid.variables()), 0), f, e);
    if (block.cwiseAbs().maxCoeff() > 1e-14) coeffs.emplace(k, std::move(block));
  }
  out.psi = AnalyticSymbol::polynomial(grid.variables(), f, e, std::move(coeffs));
  out.psi_innerness = innerness_check(out.psi, source, options.torus_samples, options.tol);

  const Matrix m_psi = mult_operator(out.psi, source).matrix();
  out.reconstruction_residual = linalg::spectral_norm((m_theta - m_phi * m_psi)(Eigen::all, window));
  return out;
}

FactorizationWitness invariant_subspace_from_factorization(const AnalyticSymbol& theta, const AnalyticSymbol& phi,
                                                           const TruncationGrid& grid,
                                                           const FactorizationOptions& options) {
  const Division div = divide_inner(theta, phi, grid, options);
  const TruncationGrid target = grid.with_coeff_dim(static_cast<int>(theta.rows()));
  const SubspaceData s_theta = submodule_projection(theta, target, options.submodule());
  const SubspaceData s_phi = submodule_projection(phi, target, options.submodule());
  const Index dim = target.size();
  const Matrix identity = Matrix::Identity(dim, dim);

  FactorizationWitness w{theta, phi, div.psi, target, Matrix(), CriterionReport{}};
  w.residuals.tolerance = options.tol;
  w.m_basis = linalg::orthonormal_columns((identity - s_theta.projection) * s_phi.basis).basis;
  const Matrix pm = w.m_basis * w.m_basis.adjoint();
  const Matrix pn = pm + s_theta.projection;

  double invariance = 0.0;
  for (std::size_t i = 0; i < grid.variables(); ++i) {
    invariance = std::max(invariance, linalg::spectral_norm((identity - pn) * shift_matrix(target, i) * pm));
  }
  const double psi_defect = std::max(div.psi_innerness.torus_deviation,
                                     div.psi_innerness.isometry_exact ? div.psi_innerness.isometry_defect : 0.0);

  w.residuals.add("reconstruction", div.reconstruction_residual);
  w.residuals.add("containment", div.containment_residual);
  w.residuals.add("analytic", div.commutation_residual);
  w.residuals.add("psi_isometry", psi_defect);
  w.residuals.add("invariance", invariance);
  w.residuals.add("complement", linalg::spectral_norm(s_phi.projection - pn));
  w.residuals.diagnostics["m_dimension"] = static_cast<double>(w.m_basis.cols());
  return w;
}

CriterionReport beurling_submodule_check(const Matrix& m_basis, const AnalyticSymbol& theta, const TruncationGrid& grid,
                                         const FactorizationOptions& options) {
  const TruncationGrid target = grid.with_coeff_dim(static_cast<int>(theta.rows()));
  if (m_basis.rows() != target.size()) throw Error(ErrorKind::DimensionMismatch, "M basis has wrong length for the grid");
  const SubspaceData s_theta = submodule_projection(theta, target, options.submodule());

  const double leak = m_basis.cols() == 0 ? 0.0 : linalg::spectral_norm(s_theta.projection * m_basis);
  if (!(leak <= options.tol)) {
    throw Error(ErrorKind::PreconditionFailed, "M is not inside Q_Theta: overlap " + std::to_string(leak));
  }

  Matrix spanning(target.size(), m_basis.cols() + s_theta.basis.cols());
  spanning << m_basis, s_theta.basis;
  SubspaceData n = make_subspace(target, spanning, core_margin(theta, options.rational_margin));
  std::vector<int> inner = n.core_window;
  for (int& e : inner) e -= 1;
  const Matrix m_core = subspace_within_window(target, linalg::orthonormal_columns(m_basis).basis, inner);
  Matrix core(target.size(), s_theta.core_basis.cols() + m_core.cols());
  core << s_theta.core_basis, m_core;
  n.core_basis = linalg::orthonormal_columns(core).basis;

  const double invariance = submodule_residual(n);
  if (!(invariance <= options.tol)) {
    throw Error(ErrorKind::PreconditionFailed,
                "N = M + S_Theta is not shift invariant: residual " + std::to_string(invariance));
  }

  CriterionReport r;
  r.tolerance = options.tol;
  const auto cond2 = cross_commutator_criterion(n, options.tol);
  const auto cond3 = beurling_criterion(quotient_data(n, options.tol), options.tol);
  r.add("sum_cross_commutator", cond2.residual("cross_commutator"));
  r.add("sum_beurling", cond3.residual("beurling"));
  r.add("agreement", r.verdict("sum_cross_commutator") == r.verdict("sum_beurling") ? 0.0 : 1.0);
  r.diagnostics["sum_invariance"] = invariance;
  r.diagnostics["m_dimension"] = static_cast<double>(m_basis.cols());
  return r;
}

ConstancyReport constancy_check(const AnalyticSymbol& theta, const TruncationGrid& grid,
                                const FactorizationOptions& options) {
  const TruncationGrid source = grid.with_coeff_dim(static_cast<int>(theta.cols()));
  const TruncationGrid target = grid.with_coeff_dim(static_cast<int>(theta.rows()));
  const std::vector<int> window = shrink(grid.caps(), exactness_margin(theta, options.rational_margin));

  ConstancyReport out;
  const auto in = source.window_positions(window);
  const auto codomain = target.window_positions(window);
  if (!codomain.empty()) {
    const Matrix range = linalg::orthonormal_columns(mult_operator(theta, source).matrix()(Eigen::all, in)).basis;
    const Matrix probe = linalg::selector(codomain, target.size());
    out.range_gap = linalg::spectral_norm(probe - range * (range.adjoint() * probe));
  }
  out.surjective = out.range_gap <= options.tol;

  const AnalyticSymbol full = theta.expanded_to(grid.caps());
  for (const auto& [k, c] : full.coefficients()) {
    if (!k.is_zero()) out.max_nonconstant_coefficient = std::max(out.max_nonconstant_coefficient, linalg::spectral_norm(c));
  }
  out.constant_coefficients = out.max_nonconstant_coefficient <= options.tol;
  return out;
}

KernelPoint::KernelPoint(std::vector<Complex> z_, std::vector<Complex> w_) : z(std::move(z_)), w(std::move(w_)) {
  if (z.empty() || z.size() != w.size()) throw Error(ErrorKind::InvalidArgument, "kernel points need equal, nonzero length");
  for (const auto* pt : {&z, &w}) {
    for (const auto& c : *pt) {
      if (!(std::abs(c) < 1.0)) throw Error(ErrorKind::InvalidArgument, "kernel point is not inside the open polydisc");
    }
  }
}

Complex szego_kernel(std::span<const Complex> z, std::span<const Complex> w) {
  Complex out = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i) out /= (1.0 - z[i] * std::conj(w[i]));
  return out;
}

Complex cofactor_kernel(std::span<const Complex> z, std::span<const Complex> w) {
  const Complex a = z[1] * std::conj(w[1]);
  return z[0] * (1.0 - a) * std::conj(w[0]) + a;
}

Complex vanishing_kernel(std::span<const Complex> z, std::span<const Complex> w) {
  return cofactor_kernel(z, w) * szego_kernel(z, w);
}

Complex vanishing_kernel_sum(std::span<const Complex> z, std::span<const Complex> w, const MultiIndex& caps) {
  const TruncationGrid grid(caps);
  Complex sum = 0.0;
  for (const auto& k : grid.monomials()) {
    if (k.is_zero()) continue;
    Complex term = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i) term *= std::pow(z[i] * std::conj(w[i]), k[i]);
    sum += term;
  }
  return sum;
}

GramWitness gram_negativity_search(const GramSearchOptions& options) {
  const std::size_t budget = options.budget;
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<GramWitness> best(jobs);

  auto run = [&](unsigned worker) {
    GramWitness& mine = best[worker];
    mine.min_eigenvalue = std::numeric_limits<double>::infinity();
    const std::size_t chunk = (budget + jobs - 1) / jobs;
    const std::size_t begin = worker * chunk;
    const std::size_t end = std::min(budget, begin + chunk);
    for (std::size_t t = begin; t < end; ++t) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
      std::mt19937_64 rng(seq);
      const std::size_t size = 2 + static_cast<std::size_t>(rng() % 3);
      std::vector<std::vector<Complex>> pts;
      for (std::size_t a = 0; a < size; ++a) pts.push_back(random_point(rng, 2, options.radius));
      Matrix gram(static_cast<Index>(size), static_cast<Index>(size));
      for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
          gram(static_cast<Index>(a), static_cast<Index>(b)) = cofactor_kernel(pts[a], pts[b]);
        }
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
      const double low = es.eigenvalues()(0);
      if (low < mine.min_eigenvalue) {
        mine.min_eigenvalue = low;
        mine.trial = t;
        mine.points = std::move(pts);
        mine.gram = std::move(gram);
        mine.eigenvalues = es.eigenvalues();
      }
    }
  };

  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(run, j);
    for (auto& th : threads) th.join();
  }

  GramWitness out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (auto& b : best) {
    if (b.points.empty()) continue;
    if (b.min_eigenvalue < out.min_eigenvalue || (b.min_eigenvalue == out.min_eigenvalue && b.trial < out.trial)) {
      out = std::move(b);
    }
  }
  if (out.points.empty()) out.min_eigenvalue = 0.0;
  out.found = out.min_eigenvalue < -options.threshold;
  return out;
}

std::vector<KernelPoint> sample_kernel_points(std::size_t count, double radius, std::uint64_t seed) {
  if (!(radius >= 0.0 && radius < 1.0)) throw Error(ErrorKind::InvalidArgument, "sample radius must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<KernelPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto z = random_point(rng, 2, radius);
    auto w = random_point(rng, 2, radius);
    out.emplace_back(std::move(z), std::move(w));
  }
  return out;
}

ConstantsQuotientReport constants_quotient_suite(const TruncationGrid& grid, const std::vector<KernelPoint>& sample_pairs,
                                const ConstantsQuotientOptions& options) {
  if (grid.variables() != 2 || grid.coeff_dim() != 1) {
    throw Error(ErrorKind::InvalidArgument, "the example lives on a scalar two-variable grid");
  }
  ConstantsQuotientReport r;
  r.summary.tolerance = options.tol;

  for (const auto& p : sample_pairs) {
    if (p.z.size() != 2) throw Error(ErrorKind::InvalidArgument, "kernel points must have two coordinates");
    const double dev = std::abs(vanishing_kernel(p.z, p.w) - vanishing_kernel_sum(p.z, p.w, grid.caps()));
    r.kernel_max_deviation = std::max(r.kernel_max_deviation, dev);
  }
  r.kernel_pairs = sample_pairs.size();

  r.gram = gram_negativity_search(options.search);
  r.gram_inconclusive = !r.gram.found;

  const AnalyticSymbol phi = phi_symbol();
  const std::vector<Complex> origin{0.0, 0.0};
  r.phi_vanishes_at_origin = phi.evaluate(origin)(0, 0) == Complex(0.0, 0.0) &&
                             phi.rational_form()->numerator->coefficient(MultiIndex::zero(2))(0, 0) == Complex(0.0, 0.0);
  r.phi_innerness = innerness_check(phi, grid, options.torus_samples, options.tol);

  const SubspaceData s_phi = submodule_projection(phi, grid, {options.tol, {}, 32});
  const SubspaceData s = vanishing_at_origin(grid);
  const auto window = s_phi.window_positions();
  std::vector<Index> s_window;
  const Index constant = grid.index(MultiIndex::zero(2), 0);
  for (Index p : window) {
    if (p != constant) s_window.push_back(p);
  }
  Matrix joint(grid.size(), s_phi.dimension() + static_cast<Index>(s_window.size()));
  joint << s_phi.basis, linalg::selector(s_window, grid.size());
  r.rank_phi_range = linalg::rank(s_phi.basis);
  r.rank_phi_with_s = linalg::rank(joint);
  r.rank_s = linalg::rank(s.basis);
  r.rank_h2 = grid.size();
  const double constant_leak = s_phi.basis.row(constant).norm();
  r.strict_inclusions = constant_leak <= options.tol && r.rank_phi_with_s > r.rank_phi_range && r.rank_s < r.rank_h2;

  r.constants_beurling_residual = beurling_criterion(quotient_data(s, options.tol), options.tol).residual("beurling");

  r.summary.add("kernel", r.kernel_max_deviation);
  r.summary.add("gram_witness", r.gram.found ? 0.0 : 1.0);
  r.summary.add("phi_innerness", r.phi_innerness.torus_deviation);
  r.summary.add("phi_at_origin", r.phi_vanishes_at_origin ? 0.0 : 1.0);
  r.summary.add("strict_inclusions", r.strict_inclusions ? 0.0 : 1.0);
  r.summary.add("constants_not_beurling", std::abs(r.constants_beurling_residual - 1.0));
  r.summary.diagnostics["gram_min_eigenvalue"] = r.gram.min_eigenvalue;
  r.summary.diagnostics["constants_beurling_residual"] = r.constants_beurling_residual;
  return r;
}

}  // namespace hardymod
