// Serial reference vs OpenMP for the data-parallel kernels and the sampler.

#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "fracgmrf/covariance.hpp"
#include "fracgmrf/factor.hpp"
#include "fracgmrf/kernels.hpp"
#include "fracgmrf/lattice.hpp"
#include "fracgmrf/sample.hpp"

using namespace fracgmrf;

namespace {

const TaylorSpectrum& spectrum2d() {
  static const auto s = taylor_coefficients(MaternParams(std::numbers::pi, 1.0, 1.0, 2), 4);
  return s;
}

template <auto Kernel>
void inverse_symbol(benchmark::State& state) {
  const DiscreteSymbol symbol(spectrum2d(), 0.1, SymbolMode::laplacian_power);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(symbol, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Kernel>
void lag_sum(benchmark::State& state) {
  const DiscreteSymbol symbol(spectrum2d(), 0.1, SymbolMode::laplacian_power);
  const int n = static_cast<int>(state.range(0));
  const auto values = kernels::inverse_symbol_grid_serial(symbol, n);
  const std::vector<int> lag{3, 7};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(values, 2, n, lag, 1.0));
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void exact_map(benchmark::State& state) {
  const MaternParams params(std::numbers::pi, 1.0, 1.0, 2);
  std::vector<double> r(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.01 * static_cast<double>(i);
  auto f = [&](double x) { return exact_matern(params, x); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::map_omp(f, r) : kernels::map_serial(f, r));
  }
}

template <bool Parallel>
void sampler(benchmark::State& state) {
  const auto s = taylor_coefficients(MaternParams(1.5, 1.0, 1.0, 1), 4);
  const LatticeGrid grid(1, 0.1, {static_cast<int>(state.range(0))});
  const auto factor = factor_by_updates(assemble_precision(s, grid, SymbolMode::separable));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? sample_field_omp(factor, grid, 1, 256)
                                      : sample_field_serial(factor, grid, 1, 256));
  }
}

}  // namespace

BENCHMARK(inverse_symbol<kernels::inverse_symbol_grid_serial>)->Arg(256)->Arg(1024);
BENCHMARK(inverse_symbol<kernels::inverse_symbol_grid_omp>)->Arg(256)->Arg(1024);
BENCHMARK(lag_sum<kernels::lag_sum_serial>)->Arg(256)->Arg(1024);
BENCHMARK(lag_sum<kernels::lag_sum_omp>)->Arg(256)->Arg(1024);
BENCHMARK(exact_map<false>)->Arg(4096);
BENCHMARK(exact_map<true>)->Arg(4096);
BENCHMARK(sampler<false>)->Arg(1024);
BENCHMARK(sampler<true>)->Arg(1024);

BENCHMARK_MAIN();
