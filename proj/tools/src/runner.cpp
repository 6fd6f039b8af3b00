#include "hardymod/cli/runner.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "hardymod/error.hpp"
#include "hardymod/factorization.hpp"

namespace hardymod::cli {

namespace {

/// Gram eigenvalues above -kGramThreshold do not count as witnesses.
constexpr double kGramThreshold = 1e-6;

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({encode_real(z.real()), encode_real(z.imag())}); }

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json symbol_json(const AnalyticSymbol& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [k, c] : s.coefficients()) {
    const std::span<const int> e = k.entries();
    coeffs.push_back({{"k", std::vector<int>(e.begin(), e.end())}, {"value", matrix_json(c)}});
  }
  return {{"rows", s.rows()}, {"cols", s.cols()}, {"coefficients", coeffs}};
}

void absorb(Report& out, const CriterionReport& r) {
  for (const auto& [k, v] : r.residuals) out.residuals[k] = v;
  for (const auto& [k, v] : r.verdicts) out.verdicts[k] = v;
  for (const auto& [k, v] : r.diagnostics) out.diagnostics[k] = v;
}

void add(Report& out, const std::string& name, double residual, double tol) {
  out.residuals[name] = residual;
  out.verdicts[name] = residual <= tol;
}

/// Submodule from the scenario's symbol or explicit subspace.
SubspaceData scenario_submodule(const Scenario& s, Report& out) {
  if (s.symbol) {
    const AnalyticSymbol theta = build_symbol(*s.symbol, s.variables, s.base_dir);
    const TruncationGrid grid(caps(s), static_cast<int>(theta.rows()));
    const SubmoduleOptions opts = submodule_options(s);
    const TruncationGrid domain = grid.with_coeff_dim(static_cast<int>(theta.cols()));
    const auto inner = innerness_check(theta, domain, opts.torus_samples, s.tol, opts.rational_margin);
    add(out, "innerness", inner.torus_deviation, s.tol);
    out.diagnostics["isometry_defect"] = inner.isometry_defect;
    return submodule_projection(theta, grid, opts);
  }
  return build_subspace(*s.subspace, TruncationGrid(caps(s)), s.base_dir);
}

void describe(Report& out, const QuotientData& q) {
  out.diagnostics["submodule_dimension"] = static_cast<double>(q.submodule.dimension());
  out.diagnostics["quotient_dimension"] = static_cast<double>(q.quotient.dimension());
  out.diagnostics["submodule_residual"] = submodule_residual(q.submodule);
  out.diagnostics["defect_min_eigenvalue"] = q.defect_min_eigenvalue;
  out.details["grid_dimension"] = q.grid().size();
  out.details["coefficient_dimension"] = q.grid().coeff_dim();
}

void run_check_beurling(const Scenario& s, Report& out) {
  const SubspaceData sub = scenario_submodule(s, out);
  const QuotientData q = quotient_data(sub, s.tol);
  describe(out, q);
  const auto beurling = beurling_criterion(q, s.tol);
  const auto cross = cross_commutator_criterion(sub, s.tol);
  const auto xij = xij_criterion(q, s.tol);
  absorb(out, beurling);
  absorb(out, cross);
  absorb(out, xij);
  const bool agree = beurling.verdict("beurling") == cross.verdict("cross_commutator") &&
                     beurling.verdict("beurling") == xij.verdict("xij");
  add(out, "agreement", agree ? 0.0 : 1.0, s.tol);
}

void run_identity_suite(const Scenario& s, Report& out) {
  const SubspaceData sub = scenario_submodule(s, out);
  const QuotientData q = quotient_data(sub, s.tol);
  describe(out, q);
  absorb(out, beurling_criterion(q, s.tol));
  absorb(out, identity_suite(q, s.tol));
}

void run_check_brehmer(const Scenario& s, Report& out) {
  if (s.tuple) {
    const ContractionTuple t = build_tuple(*s.tuple, s.variables, s.seed, s.base_dir);
    out.details["tuple_dimension"] = t.dimension();
    absorb(out, model_correspondence(t, s.tol));
    return;
  }
  const SubspaceData sub = scenario_submodule(s, out);
  const QuotientData q = quotient_data(sub, s.tol);
  describe(out, q);
  absorb(out, beurling_criterion(q, s.tol));
  absorb(out, model_correspondence(q, s.tol));
}

void run_dilate(const Scenario& s, Report& out) {
  const ContractionTuple t = build_tuple(*s.tuple, s.variables, s.seed, s.base_dir);
  const DilationData d = canonical_dilation(t, caps(s), s.tol);
  add(out, "isometry", d.isometry_residual, s.tol);
  add(out, "intertwining", d.intertwining_residual, s.tol);
  add(out, "tail_mass", d.tail_mass, s.tol);
  out.diagnostics["defect_rank"] = static_cast<double>(d.defect_space_basis.cols());
  out.details["tuple_dimension"] = t.dimension();
  out.details["dilation_dimension"] = d.grid.size();
  out.details["defect_min_eigenvalue"] = encode_real(brehmer_defect(t).min_eigenvalue);
}

void run_factor(const Scenario& s, Report& out) {
  const AnalyticSymbol theta = build_symbol(*s.theta, s.variables, s.base_dir);
  const AnalyticSymbol phi = build_symbol(*s.phi, s.variables, s.base_dir);
  const TruncationGrid grid(caps(s), static_cast<int>(theta.rows()));
  FactorizationOptions opts;
  opts.tol = s.tol;
  if (!s.margin.empty()) opts.rational_margin = MultiIndex(s.margin);
  opts.torus_samples = s.torus_samples;
  const FactorizationWitness w = invariant_subspace_from_factorization(theta, phi, grid, opts);
  absorb(out, w.residuals);
  absorb(out, beurling_submodule_check(w.m_basis, theta, grid, opts));
  const ConstancyReport psi_const = constancy_check(w.psi, grid.with_coeff_dim(static_cast<int>(w.psi.rows())), opts);
  out.details["psi"] = symbol_json(w.psi.pruned(1e-14));
  out.details["psi_unitary_constant"] = psi_const.unitary_constant();
}

void run_constants_quotient(const Scenario& s, Report& out) {
  const TruncationGrid grid(caps(s));
  const auto pairs = sample_kernel_points(s.samples, s.radius, s.seed);
  ConstantsQuotientOptions opts;
  opts.tol = s.tol;
  opts.torus_samples = s.torus_samples;
  opts.search.budget = s.budget;
  opts.search.radius = s.search_radius;
  opts.search.seed = s.seed;
  opts.search.jobs = s.jobs;
  opts.search.threshold = kGramThreshold;
  const ConstantsQuotientReport r = constants_quotient_suite(grid, pairs, opts);
  absorb(out, r.summary);

  nlohmann::json witness;
  witness["found"] = r.gram.found;
  witness["trial"] = r.gram.trial;
  witness["min_eigenvalue"] = encode_real(r.gram.min_eigenvalue);
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.gram.points) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& z : p) coords.push_back(complex_json(z));
    points.push_back(std::move(coords));
  }
  witness["points"] = points;
  witness["gram"] = matrix_json(r.gram.gram);
  nlohmann::json eig = nlohmann::json::array();
  for (Index i = 0; i < r.gram.eigenvalues.size(); ++i) eig.push_back(encode_real(r.gram.eigenvalues(i)));
  witness["eigenvalues"] = eig;
  out.details["gram_witness"] = witness;
  out.details["gram_inconclusive"] = r.gram_inconclusive;
  out.details["kernel_pairs"] = r.kernel_pairs;
  out.details["ranks"] = {{"phi_range", r.rank_phi_range},
                          {"phi_range_with_vanishing", r.rank_phi_with_s},
                          {"vanishing", r.rank_s},
                          {"grid", r.rank_h2}};
  out.diagnostics["phi_isometry_defect"] = r.phi_innerness.isometry_defect;
}

void check_expectations(const Scenario& s, Report& out) {
  const Expectation* ex = s.expect ? &*s.expect : nullptr;
  if (ex && ex->status) {
    const std::string& want = *ex->status;
    const bool met = want == "ok" ? out.ok() : out.status.rfind(want, 0) == 0;
    if (!met) out.expect_failures.push_back("status is '" + out.status + "', expected '" + want + "'");
  } else if (!out.ok() && !out.input_error) {
    out.expect_failures.push_back("unexpected " + out.status);
  }
  if (!ex) return;
  for (const auto& [name, want] : ex->verdicts) {
    const auto it = out.verdicts.find(name);
    if (it == out.verdicts.end()) {
      if (out.ok()) out.expect_failures.push_back("verdict '" + name + "' missing");
    } else if (it->second != want) {
      out.expect_failures.push_back("verdict '" + name + "' is " + (it->second ? "true" : "false") + ", expected " +
                                    (want ? "true" : "false"));
    }
  }
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& options) {
  Report out;
  out.id = s.id;
  out.command = to_string(s.command);
  out.degree = s.degree;
  out.tolerance = s.tol;
  out.seed = s.seed;
  out.version = version_stamp();
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (s.command) {
      case Command::CheckBeurling: run_check_beurling(s, out); break;
      case Command::IdentitySuite: run_identity_suite(s, out); break;
      case Command::CheckBrehmer: run_check_brehmer(s, out); break;
      case Command::Dilate: run_dilate(s, out); break;
      case Command::Factor: run_factor(s, out); break;
      case Command::ConstantsQuotient: run_constants_quotient(s, out); break;
    }
  } catch (const Error& e) {
    out.status = std::string("error: ") + e.what();
    out.input_error = e.kind() == ErrorKind::Parse;
  } catch (const std::exception& e) {
    out.status = std::string("error: internal: ") + e.what();
  }
  if (!out.ok()) {
    out.residuals.clear();
    out.verdicts.clear();
    out.diagnostics.clear();
    out.details = nlohmann::json::object();
  }
  if (options.timing) {
    out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  check_expectations(s, out);
  return out;
}

std::vector<Report> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs, const RunOptions& options) {
  std::vector<Report> reports(scenarios.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) reports[i] = run_scenario(scenarios[i], options);
  };
  if (workers <= 1) {
    work();
    return reports;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  return reports;
}

}  // namespace hardymod::cli
