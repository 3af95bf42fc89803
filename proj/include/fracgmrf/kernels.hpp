#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version that must agree with it; tests compare the two and bench/ times them.

#include <cstddef>
#include <span>
#include <vector>

#include "fracgmrf/covariance.hpp"

namespace fracgmrf::kernels {

/// 1 / D(xi_m) on the DFT grid xi_m = 2 pi m / n, m in [0, n)^d, lexicographic
/// with the last axis fastest. Throws NonPositiveSymbol naming the first
/// offending frequency (mapped into (-pi, pi]).
std::vector<double> inverse_symbol_grid_serial(const DiscreteSymbol& symbol, int n);
std::vector<double> inverse_symbol_grid_omp(const DiscreteSymbol& symbol, int n);

/// scale / n^d * sum_m cos(2 pi m . lag / n) values[m].
double lag_sum_serial(std::span<const double> values, int dim, int n,
                      std::span<const int> lag, double scale);
double lag_sum_omp(std::span<const double> values, int dim, int n,
                   std::span<const int> lag, double scale);

/// out[i] = f(args[i]).
template <class F>
std::vector<double> map_serial(F&& f, std::span<const double> args) {
  std::vector<double> out(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) out[i] = f(args[i]);
  return out;
}

template <class F>
std::vector<double> map_omp(F&& f, std::span<const double> args) {
  std::vector<double> out(args.size());
  const auto n = static_cast<long long>(args.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f(args[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// Unnormalised forward DFT of real data on an n^d grid, real part only
/// (the inputs used here are even, so the result is real).
std::vector<double> real_even_dft(std::span<const double> values, int dim, int n);

}  // namespace fracgmrf::kernels
