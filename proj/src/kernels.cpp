#include "fracgmrf/kernels.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <fftw3.h>

#include "fracgmrf/errors.hpp"

namespace fracgmrf::kernels {
namespace {

using std::numbers::pi;

std::size_t grid_size(int dim, int n) {
  std::size_t total = 1;
  for (int p = 0; p < dim; ++p) total *= static_cast<std::size_t>(n);
  return total;
}

// Multi-index of flat position m (last axis fastest).
std::array<int, 3> decode(std::size_t m, int dim, int n) {
  std::array<int, 3> idx{0, 0, 0};
  for (int p = dim - 1; p >= 0; --p) {
    idx[static_cast<std::size_t>(p)] = static_cast<int>(m % static_cast<std::size_t>(n));
    m /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::array<double, 3> frequency(std::size_t m, int dim, int n) {
  const auto idx = decode(m, dim, n);
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  for (int p = 0; p < dim; ++p) {
    xi[static_cast<std::size_t>(p)] = 2.0 * pi * idx[static_cast<std::size_t>(p)] / n;
  }
  return xi;
}

[[noreturn]] void throw_bad_symbol(const DiscreteSymbol& symbol, std::size_t m, int n) {
  const int dim = symbol.dim();
  auto xi = frequency(m, dim, n);
  std::vector<double> wrapped;
  for (int p = 0; p < dim; ++p) {
    double x = xi[static_cast<std::size_t>(p)];
    if (x > pi) x -= 2.0 * pi;
    wrapped.push_back(x);
  }
  throw NonPositiveSymbol(wrapped, symbol(std::span<const double>(xi.data(), static_cast<std::size_t>(dim))));
}

void check_grid(int dim, int n) {
  if (dim < 1 || dim > 3 || n < 1) throw InvalidArgument("invalid frequency grid");
}

}  // namespace

std::vector<double> inverse_symbol_grid_serial(const DiscreteSymbol& symbol, int n) {
  check_grid(symbol.dim(), n);
  const int dim = symbol.dim();
  std::vector<double> out(grid_size(dim, n));
  for (std::size_t m = 0; m < out.size(); ++m) {
    const auto xi = frequency(m, dim, n);
    const double v = symbol(std::span<const double>(xi.data(), static_cast<std::size_t>(dim)));
    if (!(v > 0.0)) throw_bad_symbol(symbol, m, n);
    out[m] = 1.0 / v;
  }
  return out;
}

std::vector<double> inverse_symbol_grid_omp(const DiscreteSymbol& symbol, int n) {
  check_grid(symbol.dim(), n);
  const int dim = symbol.dim();
  std::vector<double> out(grid_size(dim, n));
  const auto total = static_cast<long long>(out.size());
  long long first_bad = std::numeric_limits<long long>::max();
#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (long long m = 0; m < total; ++m) {
    const auto xi = frequency(static_cast<std::size_t>(m), dim, n);
    const double v = symbol(std::span<const double>(xi.data(), static_cast<std::size_t>(dim)));
    if (!(v > 0.0)) {
      if (m < first_bad) first_bad = m;
      out[static_cast<std::size_t>(m)] = 0.0;
    } else {
      out[static_cast<std::size_t>(m)] = 1.0 / v;
    }
  }
  if (first_bad != std::numeric_limits<long long>::max()) {
    throw_bad_symbol(symbol, static_cast<std::size_t>(first_bad), n);
  }
  return out;
}

double lag_sum_serial(std::span<const double> values, int dim, int n, std::span<const int> lag,
                      double scale) {
  check_grid(dim, n);
  double acc = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    const auto idx = decode(m, dim, n);
    long long phase = 0;
    for (int p = 0; p < dim; ++p) {
      phase += static_cast<long long>(idx[static_cast<std::size_t>(p)]) *
               lag[static_cast<std::size_t>(p)];
    }
    phase %= n;
    acc += std::cos(2.0 * pi * static_cast<double>(phase) / n) * values[m];
  }
  return scale * acc / static_cast<double>(values.size());
}

double lag_sum_omp(std::span<const double> values, int dim, int n, std::span<const int> lag,
                   double scale) {
  check_grid(dim, n);
  double acc = 0.0;
  const auto total = static_cast<long long>(values.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (long long m = 0; m < total; ++m) {
    const auto idx = decode(static_cast<std::size_t>(m), dim, n);
    long long phase = 0;
    for (int p = 0; p < dim; ++p) {
      phase += static_cast<long long>(idx[static_cast<std::size_t>(p)]) *
               lag[static_cast<std::size_t>(p)];
    }
    phase %= n;
    acc += std::cos(2.0 * pi * static_cast<double>(phase) / n) * values[static_cast<std::size_t>(m)];
  }
  return scale * acc / static_cast<double>(values.size());
}

std::vector<double> real_even_dft(std::span<const double> values, int dim, int n) {
  check_grid(dim, n);
  if (values.size() != grid_size(dim, n)) throw InvalidArgument("DFT input has the wrong size");
  std::vector<std::complex<double>> buffer(values.begin(), values.end());
  std::array<int, 3> dims{n, n, n};
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan = fftw_plan_dft(dim, dims.data(), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buffer[i].real();
  return out;
}

}  // namespace fracgmrf::kernels
