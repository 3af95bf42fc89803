#include "fracgmrf/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "fracgmrf/errors.hpp"

namespace fracgmrf {
namespace {

bool is_lattice_lag(double lag, double h) {
  const double u = lag / h;
  return std::fabs(u - std::round(u)) <= 1e-9 * std::max(1.0, std::fabs(u));
}

// Exact covariance on the non-negative quadrant of centred lags; the lattice
// field is even in every axis, so the quadrant carries the full maximum.
std::vector<double> exact_quadrant(const MaternParams& params, double h, int half) {
  const int dim = params.dim();
  const int side = half + 1;
  std::size_t total = 1;
  for (int p = 0; p < dim; ++p) total *= static_cast<std::size_t>(side);
  std::vector<double> out(total);
#pragma omp parallel for schedule(static)
  for (long long m = 0; m < static_cast<long long>(total); ++m) {
    long long rest = m;
    double r2 = 0.0;
    for (int p = 0; p < dim; ++p) {
      const double j = static_cast<double>(rest % side);
      rest /= side;
      r2 += j * j;
    }
    out[static_cast<std::size_t>(m)] = exact_matern(params, h * std::sqrt(r2));
  }
  return out;
}

}  // namespace

std::vector<ErrorVsOrderRow> error_vs_order(const ErrorVsOrderConfig& config) {
  const auto& params = config.params;
  if (!(config.h > 0.0) || !(config.side > 0.0)) {
    throw InvalidArgument("step and side must be positive");
  }
  if (config.boundary_factor < 1) throw InvalidArgument("boundary factor must be at least 1");
  if (config.k_min < 0 || config.k_max < config.k_min) {
    throw InvalidArgument("invalid order range");
  }
  const int n = static_cast<int>(std::llround(config.side / config.h)) + 1;
  const int half = (n - 1) / 2;
  const int N = config.boundary_factor * n;
  const int dim = params.dim();
  const int side = half + 1;
  const auto exact = exact_quadrant(params, config.h, half);

  std::vector<ErrorVsOrderRow> rows;
  for (SymbolMode mode : config.modes) {
    for (int K = config.k_min; K <= config.k_max; ++K) {
      ErrorVsOrderRow row;
      row.K = K;
      row.mode = mode;
      const TaylorSpectrum spectrum(params, K);
      if (spectrum.positivity().kind != Positivity::positive_everywhere) {
        row.note = "spectrum " + to_string(spectrum.positivity().kind);
        rows.push_back(row);
        continue;
      }
      std::vector<double> field;
      try {
        field = discrete_covariance_field(spectrum, config.h, N, mode);
      } catch (const NonPositiveSymbol&) {
        row.note = "non-positive lattice symbol";
        rows.push_back(row);
        continue;
      }
      double worst = 0.0;
      for (std::size_t m = 0; m < exact.size(); ++m) {
        std::size_t rest = m;
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (int p = 0; p < dim; ++p) {
          flat += (rest % static_cast<std::size_t>(side)) * stride;
          rest /= static_cast<std::size_t>(side);
          stride *= static_cast<std::size_t>(N);
        }
        worst = std::max(worst, std::fabs(field[flat] - exact[m]));
      }
      row.valid = true;
      row.max_abs_error = worst;
      rows.push_back(row);
    }
  }
  return rows;
}

UShapeSummary summarize_u_shape(const std::vector<ErrorVsOrderRow>& rows, SymbolMode mode) {
  std::vector<const ErrorVsOrderRow*> valid;
  for (const auto& r : rows) {
    if (r.mode == mode && r.valid) valid.push_back(&r);
  }
  std::sort(valid.begin(), valid.end(), [](auto* a, auto* b) { return a->K < b->K; });
  UShapeSummary summary;
  if (valid.empty()) return summary;
  const auto best = std::min_element(valid.begin(), valid.end(), [](auto* a, auto* b) {
    return a->max_abs_error < b->max_abs_error;
  });
  summary.argmin = (*best)->K;
  const auto pos = static_cast<std::size_t>(best - valid.begin());
  if (pos == 0 || pos + 1 == valid.size()) return summary;
  bool ok = true;
  for (std::size_t i = 1; i <= pos; ++i) {
    ok = ok && valid[i]->max_abs_error < valid[i - 1]->max_abs_error;
  }
  for (std::size_t i = pos + 1; i < valid.size(); ++i) {
    ok = ok && valid[i]->max_abs_error > valid[i - 1]->max_abs_error;
  }
  summary.u_shaped = ok;
  return summary;
}

std::vector<ConvergenceRow> convergence_study(const TaylorSpectrum& spectrum,
                                              const std::vector<double>& steps,
                                              const std::vector<double>& lags,
                                              SymbolMode mode, bool force_interpolated,
                                              const QuadratureSettings& settings) {
  const int dim = spectrum.params().dim();
  auto lag_vector = [dim](double x) {
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[0] = x;
    return v;
  };
  std::vector<double> continuous;
  for (double x : lags) continuous.push_back(taylor_covariance(spectrum, lag_vector(x), settings));

  std::vector<ConvergenceRow> rows;
  for (double h : steps) {
    for (std::size_t i = 0; i < lags.size(); ++i) {
      const double x = lags[i];
      ConvergenceRow row;
      row.h = h;
      row.lag = x;
      if (!force_interpolated && is_lattice_lag(x, h)) {
        std::vector<int> index(static_cast<std::size_t>(dim), 0);
        index[0] = static_cast<int>(std::lround(x / h));
        row.discrete_value = discrete_covariance(spectrum, h, index, mode);
      } else {
        row.discrete_value = interpolated_covariance(spectrum, h, lag_vector(x), mode, settings);
      }
      row.continuous_value = continuous[i];
      row.abs_error = std::fabs(row.discrete_value - row.continuous_value);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace fracgmrf
