#include "fracgmrf/sample.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>

#include <fftw3.h>

#include "fracgmrf/covariance.hpp"
#include "fracgmrf/errors.hpp"

namespace fracgmrf {
namespace {

std::vector<int> decode(std::size_t flat, std::span<const int> extents) {
  std::vector<int> idx(extents.size());
  for (int p = static_cast<int>(extents.size()) - 1; p >= 0; --p) {
    const auto n = static_cast<std::size_t>(extents[static_cast<std::size_t>(p)]);
    idx[static_cast<std::size_t>(p)] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t encode_wrapped(std::span<const int> idx, std::span<const int> extents) {
  std::size_t flat = 0;
  for (std::size_t p = 0; p < extents.size(); ++p) {
    int i = idx[p] % extents[p];
    if (i < 0) i += extents[p];
    flat = flat * static_cast<std::size_t>(extents[p]) + static_cast<std::size_t>(i);
  }
  return flat;
}

void check_factor(const CholeskyFactor& factor, const LatticeGrid& grid, int count) {
  if (count < 1) throw InvalidArgument("need at least one realization");
  if (static_cast<std::size_t>(factor.size()) != grid.working_size()) {
    throw InvalidArgument("factor size does not match the working grid");
  }
}

std::vector<double> draw_one(const CholeskyFactor& factor, std::uint64_t seed, int index) {
  auto z = standard_normals(seed, index, static_cast<std::size_t>(factor.size()));
  if (factor.form() == FactorForm::unit_diagonal) {
    const auto d = factor.d();
    for (std::size_t i = 0; i < z.size(); ++i) z[i] /= std::sqrt(d[i]);
  }
  return solve_upper(factor, z);
}

}  // namespace

std::vector<double> standard_normals(std::uint64_t seed, int index, std::size_t count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index)};
  std::mt19937_64 engine(seq);
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; i += 2) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = radius * std::cos(angle);
    if (i + 1 < count) out[i + 1] = radius * std::sin(angle);
  }
  return out;
}

std::vector<FieldRealization> sample_field_serial(const CholeskyFactor& factor,
                                                  const LatticeGrid& grid, std::uint64_t seed,
                                                  int count) {
  check_factor(factor, grid, count);
  std::vector<FieldRealization> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    out.push_back({grid, grid.crop(draw_one(factor, seed, r)), seed, r});
  }
  return out;
}

std::vector<FieldRealization> sample_field_omp(const CholeskyFactor& factor,
                                               const LatticeGrid& grid, std::uint64_t seed,
                                               int count) {
  check_factor(factor, grid, count);
  std::vector<std::vector<double>> values(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < count; ++r) {
    values[static_cast<std::size_t>(r)] = grid.crop(draw_one(factor, seed, r));
  }
  std::vector<FieldRealization> out;
  out.reserve(values.size());
  for (int r = 0; r < count; ++r) {
    out.push_back({grid, std::move(values[static_cast<std::size_t>(r)]), seed, r});
  }
  return out;
}

std::vector<FieldRealization> sample_field(const CholeskyFactor& factor, const LatticeGrid& grid,
                                           std::uint64_t seed, int count) {
  return sample_field_omp(factor, grid, seed, count);
}

std::vector<FieldRealization> sample_field_spectral(const TaylorSpectrum& spectrum,
                                                    const LatticeGrid& grid, SymbolMode mode,
                                                    std::uint64_t seed, int count) {
  if (count < 1) throw InvalidArgument("need at least one realization");
  if (spectrum.params().dim() != grid.dim()) {
    throw InvalidArgument("grid and model dimensions differ");
  }
  const DiscreteSymbol symbol(spectrum, grid.step(), mode);
  const auto extents = grid.working_extents();
  const std::size_t total = grid.working_size();

  // Eigenvalues of the periodic precision: D(xi) / sigma2.
  std::vector<double> inv_sqrt(total);
  std::vector<double> xi(extents.size());
  for (std::size_t m = 0; m < total; ++m) {
    const auto idx = decode(m, extents);
    for (std::size_t p = 0; p < extents.size(); ++p) {
      xi[p] = 2.0 * std::numbers::pi * idx[p] / extents[p];
    }
    const double d = symbol(xi);
    if (!(d > 0.0)) {
      for (double& x : xi) {
        if (x > std::numbers::pi) x -= 2.0 * std::numbers::pi;
      }
      throw NonPositiveSymbol(xi, d);
    }
    inv_sqrt[m] = std::sqrt(spectrum.params().sigma2() / d);
  }

  std::vector<std::complex<double>> buffer(total);
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  std::vector<int> dims(extents.begin(), extents.end());
  fftw_plan forward =
      fftw_plan_dft(grid.dim(), dims.data(), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan backward =
      fftw_plan_dft(grid.dim(), dims.data(), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);

  std::vector<FieldRealization> out;
  for (int r = 0; r < count; ++r) {
    const auto z = standard_normals(seed, r, total);
    for (std::size_t i = 0; i < total; ++i) buffer[i] = z[i];
    fftw_execute(forward);
    for (std::size_t i = 0; i < total; ++i) buffer[i] *= inv_sqrt[i];
    fftw_execute(backward);
    std::vector<double> x(total);
    for (std::size_t i = 0; i < total; ++i) x[i] = buffer[i].real() / static_cast<double>(total);
    out.push_back({grid, grid.crop(x), seed, r});
  }
  fftw_destroy_plan(forward);
  fftw_destroy_plan(backward);
  return out;
}

std::size_t EmpiricalCovariance::lag_index(std::size_t i, std::size_t j) const {
  const auto a = decode(i, extents);
  auto b = decode(j, extents);
  for (std::size_t p = 0; p < b.size(); ++p) b[p] -= a[p];
  return encode_wrapped(b, extents);
}

double EmpiricalCovariance::at(std::size_t i, std::size_t j) const {
  if (translation_averaged) return values[lag_index(i, j)];
  const std::size_t m = values.size() == 0 ? 0 : static_cast<std::size_t>(std::llround(std::sqrt(values.size())));
  return values[i * m + j];
}

double EmpiricalCovariance::standard_error(std::size_t i, std::size_t j) const {
  if (translation_averaged) return standard_errors[lag_index(i, j)];
  const std::size_t m = static_cast<std::size_t>(std::llround(std::sqrt(values.size())));
  return standard_errors[i * m + j];
}

EmpiricalCovariance empirical_covariance(std::span<const FieldRealization> realizations) {
  if (realizations.size() < 2) throw InvalidArgument("need at least two realizations");
  const auto& grid = realizations.front().grid;
  const std::size_t m = grid.size();
  for (const auto& f : realizations) {
    if (f.values.size() != m) throw InvalidArgument("realizations differ in size");
  }
  const auto count = static_cast<double>(realizations.size());

  std::vector<double> mean(m, 0.0);
  for (const auto& f : realizations) {
    for (std::size_t i = 0; i < m; ++i) mean[i] += f.values[i];
  }
  for (double& v : mean) v /= count;

  EmpiricalCovariance est;
  est.extents.assign(grid.extents().begin(), grid.extents().end());
  est.count = realizations.size();
  est.translation_averaged = grid.boundary().kind == Boundary::Kind::periodic;

  const std::size_t cells = est.translation_averaged ? m : m * m;
  std::vector<double> sum(cells, 0.0);
  std::vector<double> sum_sq(cells, 0.0);

  // Site i + lag for every (i, lag) pair on the periodic grid.
  std::vector<std::size_t> shifted;
  if (est.translation_averaged) {
    shifted.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto a = decode(i, est.extents);
      for (std::size_t l = 0; l < m; ++l) {
        auto b = decode(l, est.extents);
        for (std::size_t p = 0; p < b.size(); ++p) b[p] += a[p];
        shifted[i * m + l] = encode_wrapped(b, est.extents);
      }
    }
  }

  std::vector<double> y(m);
  std::vector<double> stat(cells);
  for (const auto& f : realizations) {
    for (std::size_t i = 0; i < m; ++i) y[i] = f.values[i] - mean[i];
    if (est.translation_averaged) {
      std::fill(stat.begin(), stat.end(), 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t* row = &shifted[i * m];
        for (std::size_t l = 0; l < m; ++l) stat[l] += y[i] * y[row[l]];
      }
      for (double& s : stat) s /= static_cast<double>(m);
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) stat[i * m + j] = y[i] * y[j];
      }
    }
    for (std::size_t c = 0; c < cells; ++c) {
      sum[c] += stat[c];
      sum_sq[c] += stat[c] * stat[c];
    }
  }

  const double bessel = count / (count - 1.0);
  est.values.resize(cells);
  est.standard_errors.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const double mu = sum[c] / count;
    const double var = std::max(0.0, (sum_sq[c] / count - mu * mu) * bessel);
    est.values[c] = mu * bessel;
    est.standard_errors[c] = std::sqrt(var / count) * bessel;
  }
  return est;
}

}  // namespace fracgmrf
