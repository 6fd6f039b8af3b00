#include "corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace corpus {

using namespace hardymod;

namespace {

AnalyticSymbol rotation(std::size_t n, double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return AnalyticSymbol::constant(n, r);
}

AnalyticSymbol lift(const AnalyticSymbol& scalar, Index m) {
  AnalyticSymbol::CoefficientMap coeffs;
  for (const auto& [k, c] : scalar.coefficients()) coeffs[k] = c(0, 0) * Matrix::Identity(m, m);
  return AnalyticSymbol::polynomial(scalar.variables(), m, m, std::move(coeffs));
}

MultiIndex filled(std::size_t n, int v) { return MultiIndex(std::vector<int>(n, v)); }

}  // namespace

SubspaceData Instance::submodule(double tol) const {
  if (symbol) {
    SubmoduleOptions opts;
    opts.tol = tol;
    return submodule_projection(*symbol, TruncationGrid(caps, static_cast<int>(symbol->rows())), opts);
  }
  return explicit_subspace(TruncationGrid(caps));
}

std::vector<Instance> build(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  std::vector<Instance> out;

  // Monomials z^k, nonzero k below the caps.
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = t < 12 ? 2 : 3;
    const int cap = n == 2 ? pick(2, 6) : pick(2, 4);
    std::vector<int> k(n);
    do {
      for (auto& e : k) e = pick(0, std::min(cap - 1, 2));
    } while (MultiIndex(k).is_zero());
    Instance in;
    in.caps = filled(n, cap);
    in.symbol = AnalyticSymbol::monomial(MultiIndex(k));
    in.name = "monomial z^" + MultiIndex(k).to_string() + " caps " + in.caps.to_string();
    out.push_back(std::move(in));
  }

  // Products of one-variable Blaschke factors in separate variables.
  for (int t = 0; t < 18; ++t) {
    const std::size_t n = t < 12 ? 2 : 3;
    const int cap = n == 2 ? pick(3, 6) : pick(3, 4);
    std::optional<AnalyticSymbol> prod;
    std::string label;
    const std::size_t factors = 1 + rng() % n;
    for (std::size_t v = 0; v < factors; ++v) {
      const Complex a = std::polar(0.1 + 0.4 * unit(rng), 2 * std::numbers::pi * unit(rng));
      const AnalyticSymbol b = AnalyticSymbol::blaschke(n, v, a);
      prod = prod ? *prod * b : b;
      label += (label.empty() ? "" : "*") + std::string("b(z") + std::to_string(v + 1) + ")";
    }
    Instance in;
    in.caps = filled(n, cap);
    in.symbol = *prod;
    in.blaschke = true;
    in.name = "blaschke " + label + " caps " + in.caps.to_string();
    out.push_back(std::move(in));
  }

  // Constant unitaries, scalar and 2x2, alone and times a monomial.
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = t % 2 == 0 ? 2 : 3;
    const int cap = n == 2 ? pick(2, 5) : pick(2, 3);
    const double angle = 2 * std::numbers::pi * unit(rng);
    Instance in;
    in.caps = filled(n, cap);
    if (t < 4) {
      in.symbol = AnalyticSymbol::constant(n, Matrix::Constant(1, 1, std::polar(1.0, angle)));
      in.name = "unimodular constant caps " + in.caps.to_string();
    } else if (t < 8) {
      in.symbol = rotation(n, angle);
      in.name = "rotation constant caps " + in.caps.to_string();
    } else {
      const MultiIndex k = MultiIndex::unit(n, rng() % n);
      in.symbol = rotation(n, angle) * lift(AnalyticSymbol::monomial(k), 2);
      in.name = "rotation * z^" + k.to_string() + " caps " + in.caps.to_string();
    }
    out.push_back(std::move(in));
  }

  // Non-Beurling: monomial ideals that are not principal.
  const std::vector<std::pair<std::vector<MultiIndex>, MultiIndex>> ideals = {
      {{{1, 0}, {0, 1}}, {3, 3}},
      {{{1, 0}, {0, 1}}, {5, 5}},
      {{{2, 0}, {0, 1}}, {4, 4}},
      {{{1, 0}, {0, 2}}, {5, 4}},
      {{{2, 0}, {1, 1}, {0, 2}}, {5, 5}},
      {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {3, 3, 3}},
      {{{1, 0, 0}, {0, 1, 0}}, {3, 3, 2}},
      {{{1, 1, 0}, {0, 0, 1}}, {3, 3, 3}},
  };
  for (const auto& [gens, caps] : ideals) {
    Instance in;
    in.caps = caps;
    in.beurling = false;
    in.explicit_subspace = [gens](const TruncationGrid& g) { return monomial_ideal(g, gens); };
    std::string label;
    for (const auto& g : gens) label += (label.empty() ? "" : ",") + g.to_string();
    in.name = "ideal <" + label + "> caps " + caps.to_string();
    out.push_back(std::move(in));
  }
  return out;
}

std::size_t symbol_count(const std::vector<Instance>& instances) {
  std::size_t count = 0;
  for (const auto& in : instances) count += in.symbol ? 1 : 0;
  return count;
}

}  // namespace corpus
