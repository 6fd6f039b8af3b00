#include "hardymod/subspace.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hardymod/error.hpp"
#include "hardymod/linalg.hpp"

namespace hardymod {

namespace {

constexpr double kPsdFloor = -1e-10;

MultiIndex ones(std::size_t n) { return MultiIndex(std::vector<int>(n, 1)); }

double windowed_norm(const Matrix& a, const std::vector<Index>& window) {
  return linalg::spectral_norm(linalg::compress(a, window));
}

// C^k = prod_t C_t^{k_t} for the extended compressions.
Matrix compression_power(const std::vector<Matrix>& extended, const MultiIndex& k, Index dim) {
  Matrix out = Matrix::Identity(dim, dim);
  for (std::size_t t = 0; t < k.size(); ++t) {
    for (int p = 0; p < k[t]; ++p) out = extended[t] * out;
  }
  return out;
}

void validate_probe(const IdentityProbe& p, std::size_t n) {
  const bool ok = p.i < n && p.j < n && p.i != p.j && p.k_hat.size() == n && p.l_hat.size() == n &&
                  p.k_hat[p.i] == 0 && p.l_hat[p.j] == 0 && !p.k_hat.is_zero() && !p.l_hat.is_zero();
  if (!ok) {
    throw Error(ErrorKind::InvalidArgument,
                "invalid multi-index shape for probe (i=" + std::to_string(p.i) + ", j=" + std::to_string(p.j) +
                    ", k=" + p.k_hat.to_string() + ", l=" + p.l_hat.to_string() + ")");
  }
}

// Orthonormal basis of span(basis) intersected with the coordinate window.
Matrix window_intersection_impl(const TruncationGrid& grid, const Matrix& basis, const std::vector<int>& window) {
  const auto inside = grid.window_positions(window);
  std::vector<char> keep(static_cast<std::size_t>(grid.size()), 0);
  for (Index p : inside) keep[static_cast<std::size_t>(p)] = 1;
  std::vector<Index> outside;
  for (Index p = 0; p < grid.size(); ++p) {
    if (!keep[static_cast<std::size_t>(p)]) outside.push_back(p);
  }
  if (basis.cols() == 0) return basis;
  if (outside.empty()) return basis;
  // Coefficient vectors c with (basis c) vanishing outside the window.
  const Matrix tail = basis(outside, Eigen::all);
  Eigen::JacobiSVD<Matrix> svd(tail, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = linalg::kRankTolerance * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  const Matrix null = svd.matrixV().rightCols(basis.cols() - r);
  return linalg::orthonormal_columns(basis * null).basis;
}

Matrix shifted_submodule_defect(const TruncationGrid& grid, const Matrix& pq, const Matrix& shift) {
  // M_t^* P_S M_t = I - M_t^* P_Q M_t, since M_t is an isometry and the
  // monomials it pushes past the caps lie in S.
  return Matrix::Identity(grid.size(), grid.size()) - shift.adjoint() * pq * shift;
}

}  // namespace

bool CriterionReport::all() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second; });
}

void CriterionReport::merge(const CriterionReport& other, const std::string& prefix) {
  for (const auto& [k, v] : other.residuals) residuals[prefix + k] = v;
  for (const auto& [k, v] : other.verdicts) verdicts[prefix + k] = v;
  for (const auto& [k, v] : other.diagnostics) diagnostics[prefix + k] = v;
}

Matrix subspace_within_window(const TruncationGrid& grid, const Matrix& basis, const std::vector<int>& window) {
  return window_intersection_impl(grid, basis, window);
}

SubspaceData make_subspace(const TruncationGrid& grid, const Matrix& columns, const MultiIndex& core_margin) {
  if (columns.rows() != grid.size()) throw Error(ErrorKind::DimensionMismatch, "subspace vectors have wrong length for the grid");
  const MultiIndex margin = core_margin.size() == 0 ? ones(grid.variables()) : core_margin;
  auto ortho = linalg::orthonormal_columns(columns);
  SubspaceData s{grid, std::move(ortho.basis), Matrix(), shrink(grid.caps(), margin), Matrix(), ortho.discarded};
  s.projection = s.basis * s.basis.adjoint();
  // One degree below the window so shifted core vectors stay inside it.
  std::vector<int> inner = s.core_window;
  for (int& e : inner) e -= 1;
  s.core_basis = window_intersection_impl(grid, s.basis, inner);
  return s;
}

SubspaceData submodule_projection(const AnalyticSymbol& symbol, const TruncationGrid& grid,
                                  const SubmoduleOptions& options) {
  if (grid.coeff_dim() != symbol.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "grid coefficient dimension differs from the symbol row dimension");
  }
  const TruncationGrid domain = grid.with_coeff_dim(static_cast<int>(symbol.cols()));
  const auto inner = innerness_check(symbol, domain, options.torus_samples, options.tol, options.rational_margin);
  if (!inner.passed()) {
    throw Error(ErrorKind::PreconditionFailed,
                "innerness failure: torus deviation " + std::to_string(inner.torus_deviation) +
                    ", isometry defect " + std::to_string(inner.isometry_defect) +
                    (inner.evaluation_overflow ? ", evaluation overflow on the torus" : ""));
  }
  const auto window = domain.window_positions(shrink(grid.caps(), exactness_margin(symbol, options.rational_margin)));
  const Matrix cols = mult_operator(symbol, domain).matrix()(Eigen::all, window);
  SubspaceData s = make_subspace(grid, cols, core_margin(symbol, options.rational_margin));
  if (s.discarded > 0) {
    throw Error(ErrorKind::NumericalFailure,
                "rank collapse: " + std::to_string(s.discarded) + " numerically dependent columns discarded");
  }
  // Generators Theta z^k whose shifts Theta z^{k+e_i} are generators again.
  std::vector<int> generator_window = shrink(domain.caps(), exactness_margin(symbol, options.rational_margin));
  for (int& e : generator_window) e -= 1;
  const auto core_cols = domain.window_positions(generator_window);
  s.core_basis = linalg::orthonormal_columns(
      mult_operator(symbol, domain).matrix()(Eigen::all, core_cols)).basis;
  return s;
}

SubspaceData vanishing_at_origin(const TruncationGrid& grid) {
  const Index m = grid.coeff_dim();
  return make_subspace(grid, Matrix::Identity(grid.size(), grid.size()).rightCols(grid.size() - m));
}

SubspaceData monomial_ideal(const TruncationGrid& grid, const std::vector<MultiIndex>& generators) {
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "monomial ideal needs at least one generator");
  std::vector<int> margin(grid.variables(), 1);
  std::vector<Index> keep;
  for (const auto& [k, c] : enumerate_basis(grid)) {
    const bool inside = std::any_of(generators.begin(), generators.end(), [&](const MultiIndex& g) { return g.fits_within(k); });
    if (inside) keep.push_back(grid.index(k, c));
  }
  for (const auto& g : generators) {
    for (std::size_t i = 0; i < g.size(); ++i) margin[i] = std::max(margin[i], g[i]);
  }
  return make_subspace(grid, linalg::selector(keep, grid.size()), MultiIndex(margin));
}

SubspaceData orthocomplement(const SubspaceData& s) {
  SubspaceData q{s.grid, linalg::orthocomplement(s.basis, s.grid.size()), Matrix(), s.core_window, Matrix(), 0};
  q.projection = q.basis * q.basis.adjoint();
  return q;
}

double submodule_residual(const SubspaceData& s) {
  double worst = 0.0;
  if (s.core_basis.cols() == 0) return worst;
  for (std::size_t i = 0; i < s.grid.variables(); ++i) {
    const Matrix shifted = shift_matrix(s.grid, i) * s.core_basis;
    worst = std::max(worst, linalg::spectral_norm(s.projection * shifted - shifted));
  }
  return worst;
}

Matrix QuotientData::extended_defect(std::size_t i) const {
  const Matrix& c = compressions.extended.at(i);
  return quotient.projection - c.adjoint() * c;
}

QuotientData quotient_data(const SubspaceData& s, double tol) {
  const double invariance = submodule_residual(s);
  if (!(invariance <= tol)) {
    throw Error(ErrorKind::PreconditionFailed,
                "submodule invariance failure: residual " + std::to_string(invariance));
  }
  QuotientData q{s, orthocomplement(s), {}, {}, {}, 0.0, 0.0};
  const auto window = q.window_positions();
  const Matrix& pq = q.quotient.projection;
  const Matrix& qb = q.quotient.basis;
  const Matrix& sb = q.submodule.basis;
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.grid.variables(); ++i) {
    const Matrix m = shift_matrix(s.grid, i);
    q.compressions.extended.push_back(pq * m * pq);
    q.compressions.operators.push_back(qb.adjoint() * m * qb);
    q.compressions.restricted.push_back(sb.adjoint() * m * sb);
    const Matrix& c = q.compressions.operators.back();
    Matrix defect = Matrix::Identity(qb.cols(), qb.cols()) - c.adjoint() * c;
    min_eig = std::min(min_eig, linalg::min_eigenvalue(defect));
    q.defect_roots.push_back(linalg::psd_sqrt(defect));
    q.defects.push_back(std::move(defect));

    const Matrix rhs = pq * shifted_submodule_defect(s.grid, pq, m) * pq;
    q.defect_identity_residual = std::max(q.defect_identity_residual, windowed_norm(q.extended_defect(i) - rhs, window));
  }
  q.defect_min_eigenvalue = qb.cols() == 0 ? 0.0 : min_eig;
  if (q.defect_min_eigenvalue < kPsdFloor) {
    throw Error(ErrorKind::NumericalFailure,
                "defect operator not positive: min eigenvalue " + std::to_string(q.defect_min_eigenvalue));
  }
  return q;
}

CriterionReport beurling_criterion(const QuotientData& q, double tol) {
  CriterionReport r;
  r.tolerance = tol;
  const auto window = q.window_positions();
  const std::size_t n = q.grid().variables();
  std::vector<Matrix> defects;
  for (std::size_t i = 0; i < n; ++i) defects.push_back(q.extended_defect(i));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      worst = std::max(worst, windowed_norm(defects[i] * defects[j], window));
    }
  }
  r.add("beurling", worst);
  return r;
}

CriterionReport cross_commutator_criterion(const SubspaceData& s, double tol) {
  CriterionReport r;
  r.tolerance = tol;
  const auto window = s.window_positions();
  const std::size_t n = s.grid.variables();
  const Matrix& ps = s.projection;
  std::vector<Matrix> rs;
  for (std::size_t i = 0; i < n; ++i) rs.push_back(ps * shift_matrix(s.grid, i) * ps);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Matrix comm = rs[j].adjoint() * rs[i] - rs[i] * rs[j].adjoint();
      worst = std::max(worst, windowed_norm(comm, window));
    }
  }
  r.add("cross_commutator", worst);
  return r;
}

CriterionReport xij_criterion(const QuotientData& q, double tol) {
  CriterionReport r;
  r.tolerance = tol;
  const auto window = q.window_positions();
  const std::size_t n = q.grid().variables();
  const Matrix& pq = q.quotient.projection;
  const Matrix& ps = q.submodule.projection;
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix m = shift_matrix(q.grid(), i);
    left.push_back(ps * m * pq);
    right.push_back(m.adjoint() * ps);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) worst = std::max(worst, windowed_norm(left[i] * right[j], window));
    }
  }
  r.add("xij", worst);
  return r;
}

std::vector<IdentityProbe> default_probes(std::size_t variables, int max_degree) {
  std::vector<IdentityProbe> out;
  if (variables < 2) return out;
  std::vector<int> caps(variables, max_degree);
  const TruncationGrid box{MultiIndex(caps)};
  for (std::size_t i = 0; i < variables; ++i) {
    for (std::size_t j = 0; j < variables; ++j) {
      if (i == j) continue;
      for (const auto& k : box.monomials()) {
        if (k.is_zero() || k[i] != 0 || k.total_degree() > max_degree) continue;
        for (const auto& l : box.monomials()) {
          if (l.is_zero() || l[j] != 0 || l.total_degree() > max_degree) continue;
          out.push_back({i, j, k, l});
        }
      }
    }
  }
  return out;
}

CriterionReport identity_suite(const QuotientData& q, double tol) {
  const std::size_t n = q.grid().variables();
  return identity_suite(q, default_probes(n, n <= 2 ? 2 : 1), tol);
}

CriterionReport identity_suite(const QuotientData& q, const std::vector<IdentityProbe>& probes, double tol) {
  const std::size_t n = q.grid().variables();
  for (const auto& p : probes) validate_probe(p, n);

  CriterionReport r;
  r.tolerance = tol;
  const TruncationGrid& grid = q.grid();
  const Index dim = grid.size();
  const auto window = q.window_positions();
  const Matrix& pq = q.quotient.projection;
  const Matrix& ps = q.submodule.projection;
  const auto& ext = q.compressions.extended;

  std::vector<Matrix> shifts;
  std::vector<Matrix> a_t;
  for (std::size_t t = 0; t < n; ++t) {
    shifts.push_back(shift_matrix(grid, t));
    a_t.push_back(shifted_submodule_defect(grid, pq, shifts.back()));
  }

  // X_ij for every ordered pair.
  std::vector<std::vector<Matrix>> x(n, std::vector<Matrix>(n));
  double xij = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      x[i][j] = ps * shifts[i] * pq * shifts[j].adjoint() * ps;
      xij = std::max(xij, windowed_norm(x[i][j], window));
    }
  }
  r.add("xij", xij);
  r.add("defect_identity", q.defect_identity_residual);

  double commutator_identity = 0.0;
  double domination = std::numeric_limits<double>::infinity();
  std::map<std::pair<std::size_t, MultiIndex>, bool> seen;
  for (const auto& p : probes) {
    if (!seen.emplace(std::make_pair(p.i, p.k_hat), true).second) continue;
    const Matrix c_star_k = compression_power(ext, p.k_hat, dim).adjoint();
    const Matrix comm = ext[p.i] * c_star_k - c_star_k * ext[p.i];
    const Matrix rhs = pq * shift_power(grid, p.k_hat).adjoint() * ps * shifts[p.i] * pq;
    commutator_identity = std::max(commutator_identity, windowed_norm(comm - rhs, window));
    const Matrix gap = q.extended_defect(p.i) - comm.adjoint() * comm;
    domination = std::min(domination, linalg::min_eigenvalue(linalg::compress(gap, window)));
  }
  if (!seen.empty()) {
    r.add("commutator_identity", commutator_identity);
    r.add("commutator_domination", std::max(0.0, -domination));
    r.diagnostics["commutator_domination_min_eigenvalue"] = domination;
  }

  const bool beurling = beurling_criterion(q, tol).verdict("beurling");
  r.diagnostics["zero_products_evaluated"] = beurling ? 1.0 : 0.0;
  if (beurling && !probes.empty()) {
    double zero_products = 0.0;
    for (const auto& p : probes) {
      const Matrix left_k = pq * shift_power(grid, p.k_hat).adjoint();
      const Matrix right_l = shift_power(grid, p.l_hat) * pq;
      const Matrix& xm = x[p.i][p.j];
      // M_i^* X_ij and X_ij M_j contain M_t^* P_S M_t factors.
      const Matrix tail = pq * shifts[p.j].adjoint() * ps * right_l;
      const Matrix head = left_k * ps * shifts[p.i] * pq;
      zero_products = std::max({zero_products, windowed_norm(left_k * xm * right_l, window),
                          windowed_norm(pq * a_t[p.i] * pq * tail, window),
                          windowed_norm(head * a_t[p.j] * pq, window)});
    }
    r.add("zero_products", zero_products);
  }

  double reduces = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    reduces = std::max(reduces, windowed_norm(pq * a_t[t] - a_t[t] * pq, window));
  }
  r.add("reduces", reduces);
  return r;
}

CommutatorFactor commutator_factor(const QuotientData& q, std::size_t i, const MultiIndex& k_hat) {
  const std::size_t n = q.grid().variables();
  if (i >= n || k_hat.size() != n || k_hat[i] != 0 || k_hat.is_zero()) {
    throw Error(ErrorKind::InvalidArgument, "invalid multi-index shape for commutator factor");
  }
  const Matrix& qb = q.quotient.basis;
  const Index r = qb.cols();
  Matrix c_star_k = Matrix::Identity(r, r);
  for (std::size_t t = 0; t < n; ++t) {
    for (int p = 0; p < k_hat[t]; ++p) c_star_k = q.compressions.operators[t].adjoint() * c_star_k;
  }
  const Matrix& ci = q.compressions.operators[i];
  const Matrix comm = ci * c_star_k - c_star_k * ci;
  const Matrix& root = q.defect_roots[i];
  // Pseudo-inverse of D_{C_i} on its numerical range.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (root + root.adjoint()));
  const double cutoff = linalg::kRankTolerance * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(r);
  for (Index e = 0; e < r; ++e) {
    if (es.eigenvalues()(e) > cutoff) inv(e) = 1.0 / es.eigenvalues()(e);
  }
  CommutatorFactor out;
  out.x = comm * (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint());
  out.norm = linalg::spectral_norm(out.x);
  out.residual = linalg::spectral_norm(comm - out.x * root);
  return out;
}

}  // namespace hardymod
