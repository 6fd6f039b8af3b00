#include <benchmark/benchmark.h>

#include "hardymod/dilation.hpp"
#include "hardymod/factorization.hpp"
#include "hardymod/subspace.hpp"

using namespace hardymod;

namespace {

MultiIndex square(benchmark::State& state) {
  const int cap = static_cast<int>(state.range(0));
  return MultiIndex{cap, cap};
}

void BM_MultOperatorPhi(benchmark::State& state) {
  const TruncationGrid grid(square(state));
  const AnalyticSymbol phi = phi_symbol();
  for (auto _ : state) benchmark::DoNotOptimize(mult_operator(phi, grid).matrix());
}
BENCHMARK(BM_MultOperatorPhi)->Arg(8)->Arg(16)->Arg(24);

void BM_SubmoduleProjectionMonomial(benchmark::State& state) {
  const TruncationGrid grid(square(state));
  const AnalyticSymbol theta = AnalyticSymbol::monomial({1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(submodule_projection(theta, grid).projection);
}
BENCHMARK(BM_SubmoduleProjectionMonomial)->Arg(4)->Arg(8)->Arg(12);

void BM_BeurlingCriterionBlaschke(benchmark::State& state) {
  const TruncationGrid grid(square(state));
  const AnalyticSymbol theta = AnalyticSymbol::blaschke(2, 0, 0.5);
  SubmoduleOptions opts;
  opts.tol = 1e-6;
  for (auto _ : state) {
    const QuotientData q = quotient_data(submodule_projection(theta, grid, opts), 1e-6);
    benchmark::DoNotOptimize(beurling_criterion(q, 1e-6).residual("beurling"));
  }
}
BENCHMARK(BM_BeurlingCriterionBlaschke)->Arg(4)->Arg(6)->Arg(8);

void BM_IdentitySuite(benchmark::State& state) {
  const QuotientData q = quotient_data(submodule_projection(AnalyticSymbol::monomial({1, 1}), TruncationGrid(square(state))));
  for (auto _ : state) benchmark::DoNotOptimize(identity_suite(q).residuals);
}
BENCHMARK(BM_IdentitySuite)->Arg(4)->Arg(6)->Arg(8);

void BM_CanonicalDilation(benchmark::State& state) {
  const ContractionTuple t = random_nilpotent_brehmer_pair(3);
  const MultiIndex caps = square(state);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_dilation(t, caps).pi);
}
BENCHMARK(BM_CanonicalDilation)->Arg(4)->Arg(8);

void BM_GramSearch(benchmark::State& state) {
  GramSearchOptions opts;
  opts.seed = 1;
  opts.threshold = 1e-6;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gram_negativity_search(opts).min_eigenvalue);
}
BENCHMARK(BM_GramSearch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
