// Serial reference vs OpenMP restarts for the two multi-start solvers.
#include <benchmark/benchmark.h>

#include "qmarg/maxent.hpp"
#include "qmarg/uniqueness.hpp"

namespace {

using namespace qmarg;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

MarginalSet singlet_marginals() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = std::sqrt(0.5);
  v(2) = -std::sqrt(0.5);
  const auto s = density_from_pure(PureState({2, 2}, v));
  return MarginalSet({2, 2, 2}, {{{0, 1}, s}, {{1, 2}, s}, {{0, 2}, s}});
}

void BM_Feasibility(benchmark::State& state) {
  const MarginalSet targets = singlet_marginals();
  FeasibilityConfig cfg;
  cfg.restarts = static_cast<std::size_t>(state.range(1));
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(marginal_feasibility(targets, cfg));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_UniquenessSearch(benchmark::State& state) {
  Rng rng(3);
  const PureState psi = haar_state({2, 2, 2}, rng);
  SearchConfig cfg;
  cfg.restarts = static_cast<std::size_t>(state.range(1));
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(uniqueness_search(psi, cfg));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_Feasibility)->ArgsProduct({{0, 1}, {4, 16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UniquenessSearch)->ArgsProduct({{0, 1}, {4, 16}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
