#include "fracgmrf/covariance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracgmrf/errors.hpp"
#include "fracgmrf/kernels.hpp"
#include "fracgmrf/specfun.hpp"

namespace fracgmrf {
namespace {

using std::numbers::pi;

double lag_norm(std::span<const double> lag, int dim) {
  if (static_cast<int>(lag.size()) != dim) {
    throw InvalidArgument("lag has " + std::to_string(lag.size()) + " coordinates, expected " +
                          std::to_string(dim));
  }
  double s = 0.0;
  for (double x : lag) s += x * x;
  return std::sqrt(s);
}

void require_step(double h) {
  if (!std::isfinite(h) || !(h > 0.0)) throw InvalidArgument("lattice step must be positive");
}

// Smallest order for which the reciprocal polynomial is integrable on R^d.
void require_integrable(const TaylorSpectrum& spectrum) {
  if (2 * spectrum.effective_order() <= spectrum.params().dim()) {
    throw InvalidArgument("reciprocal Taylor polynomial of order " +
                          std::to_string(spectrum.effective_order()) +
                          " is not integrable in dimension " +
                          std::to_string(spectrum.params().dim()));
  }
}

}  // namespace

std::string to_string(SymbolMode mode) {
  return mode == SymbolMode::separable ? "separable" : "laplacian_power";
}

SymbolMode parse_symbol_mode(const std::string& name) {
  if (name == "separable") return SymbolMode::separable;
  if (name == "laplacian_power") return SymbolMode::laplacian_power;
  throw InvalidArgument("unknown symbol mode '" + name + "'");
}

SymbolMode default_symbol_mode(int dim) {
  return dim == 1 ? SymbolMode::separable : SymbolMode::laplacian_power;
}

int default_frequency_points(int dim) {
  switch (dim) {
    case 1: return 1024;
    case 2: return 512;
    default: return 128;
  }
}

std::string to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::exact: return "exact";
    case CovarianceKind::band_limited: return "band_limited";
    case CovarianceKind::taylor: return "taylor";
    case CovarianceKind::discrete: return "discrete";
    case CovarianceKind::interpolated: return "interpolated";
  }
  return "exact";
}

CovarianceKind parse_covariance_kind(const std::string& name) {
  for (auto kind : {CovarianceKind::exact, CovarianceKind::band_limited, CovarianceKind::taylor,
                    CovarianceKind::discrete, CovarianceKind::interpolated}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown covariance kind '" + name + "'");
}

DiscreteSymbol::DiscreteSymbol(const TaylorSpectrum& spectrum, double h, SymbolMode mode)
    : dim_(spectrum.params().dim()), h_(h), sigma2_(spectrum.params().sigma2()), mode_(mode) {
  require_step(h);
  const auto c = spectrum.c();
  b_.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    b_[k] = c[k] * std::pow(h, dim_ - 2.0 * static_cast<double>(k));
  }
}

double DiscreteSymbol::operator()(std::span<const double> xi) const noexcept {
  // 2 - 2 cos x = 4 sin^2(x / 2), without cancellation near 0.
  auto s_of = [](double x) {
    const double s = std::sin(0.5 * x);
    return 4.0 * s * s;
  };
  auto poly_from_one = [this](double s) {
    double acc = 0.0;
    for (std::size_t k = b_.size() - 1; k >= 1; --k) acc = (acc + b_[k]) * s;
    return acc;
  };
  if (mode_ == SymbolMode::laplacian_power || dim_ == 1) {
    double s = 0.0;
    for (int p = 0; p < dim_; ++p) s += s_of(xi[static_cast<std::size_t>(p)]);
    return b_[0] + poly_from_one(s);
  }
  double total = b_[0];
  for (int p = 0; p < dim_; ++p) total += poly_from_one(s_of(xi[static_cast<std::size_t>(p)]));
  return total;
}

double exact_matern(const MaternParams& params, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("lag magnitude must be non-negative");
  const double alpha = params.alpha();
  const double kappa = params.kappa();
  const double nu = params.nu();
  const double d = params.dim();
  if (r == 0.0) {
    return params.sigma2() * gamma(nu) /
           (std::pow(4.0 * pi, 0.5 * d) * gamma(alpha) * std::pow(kappa, 2.0 * nu));
  }
  const double x = kappa * r;
  if (x > 700.0) return 0.0;
  const double pref = params.sigma2() * std::pow(2.0, 1.0 - alpha) /
                      (std::pow(2.0 * pi, 0.5 * d) * gamma(alpha));
  return pref * std::pow(r / kappa, nu) * bessel_k(BesselOrder(nu), x);
}

double spectral_matern(const MaternParams& params, double r, const QuadratureSettings& settings) {
  const double k2 = params.kappa() * params.kappa();
  const double alpha = params.alpha();
  auto density = [&](double rho) { return std::pow(k2 + rho * rho, -alpha); };
  return params.sigma2() * radial_fourier_whole_space(density, params.dim(), r,
                                                      8.0 * params.kappa(), settings);
}

double band_limited(const MaternParams& params, std::span<const double> lag,
                    const QuadratureSettings& settings) {
  const double r = lag_norm(lag, params.dim());
  const double k2 = params.kappa() * params.kappa();
  const double alpha = params.alpha();
  auto density = [&](double rho) { return std::pow(k2 + rho * rho, -alpha); };
  return params.sigma2() *
         radial_fourier(density, params.dim(), r, 0.0, params.kappa(), settings);
}

double taylor_covariance(const TaylorSpectrum& spectrum, std::span<const double> lag,
                         const QuadratureSettings& settings) {
  const auto& params = spectrum.params();
  const double r = lag_norm(lag, params.dim());
  if (spectrum.positivity().kind != Positivity::positive_everywhere) {
    throw InvalidArgument("whole-space Taylor covariance needs a positive_everywhere spectrum (got " +
                          to_string(spectrum.positivity().kind) + ")");
  }
  require_integrable(spectrum);
  auto density = [&](double rho) { return 1.0 / spectrum.evaluate(rho); };
  return params.sigma2() * radial_fourier_whole_space(density, params.dim(), r,
                                                      8.0 * params.kappa(), settings);
}

double taylor_covariance_on_ball(const TaylorSpectrum& spectrum, std::span<const double> lag,
                                 double radius, const QuadratureSettings& settings) {
  const auto& params = spectrum.params();
  const double r = lag_norm(lag, params.dim());
  const auto& pos = spectrum.positivity();
  const bool ok = pos.kind == Positivity::positive_everywhere ||
                  (pos.kind == Positivity::positive_on_ball && radius <= pos.radius);
  if (!ok || !(radius > 0.0)) {
    throw InvalidArgument("Taylor polynomial is not positive on the requested ball");
  }
  auto density = [&](double rho) { return 1.0 / spectrum.evaluate(rho); };
  return params.sigma2() * radial_fourier(density, params.dim(), r, 0.0, radius, settings);
}

double discrete_covariance(const TaylorSpectrum& spectrum, double h,
                           std::span<const int> lag_index, SymbolMode mode,
                           int frequency_points) {
  const int dim = spectrum.params().dim();
  if (static_cast<int>(lag_index.size()) != dim) {
    throw InvalidArgument("lag index has the wrong number of coordinates");
  }
  const int n = frequency_points > 0 ? frequency_points : default_frequency_points(dim);
  const DiscreteSymbol symbol(spectrum, h, mode);
  const auto inverse = kernels::inverse_symbol_grid_omp(symbol, n);
  return kernels::lag_sum_omp(inverse, dim, n, lag_index, spectrum.params().sigma2());
}

std::vector<double> discrete_covariance_field(const TaylorSpectrum& spectrum, double h,
                                              int frequency_points, SymbolMode mode) {
  const int dim = spectrum.params().dim();
  if (frequency_points < 1) throw InvalidArgument("frequency grid must be non-empty");
  const DiscreteSymbol symbol(spectrum, h, mode);
  const auto inverse = kernels::inverse_symbol_grid_omp(symbol, frequency_points);
  auto field = kernels::real_even_dft(inverse, dim, frequency_points);
  const double scale = spectrum.params().sigma2() / static_cast<double>(inverse.size());
  for (double& v : field) v *= scale;
  return field;
}

double interpolated_covariance(const TaylorSpectrum& spectrum, double h,
                               std::span<const double> lag, SymbolMode mode,
                               const QuadratureSettings& settings) {
  const int dim = spectrum.params().dim();
  lag_norm(lag, dim);
  const DiscreteSymbol symbol(spectrum, h, mode);
  // Positivity screen on the default frequency grid (throws with the offending xi).
  kernels::inverse_symbol_grid_omp(symbol, default_frequency_points(dim));

  std::vector<double> u(lag.size());
  for (std::size_t p = 0; p < lag.size(); ++p) u[p] = lag[p] / h;
  auto panel = [&](int p) {
    const double up = std::fabs(u[static_cast<std::size_t>(p)]);
    return up > 1.0 ? pi / up : pi;
  };

  std::vector<double> xi(static_cast<std::size_t>(dim));
  std::function<double(int)> nested = [&](int axis) -> double {
    auto integrand = [&, axis](double eta) {
      xi[static_cast<std::size_t>(axis)] = eta;
      const double weight = std::cos(u[static_cast<std::size_t>(axis)] * eta);
      if (axis + 1 < dim) return weight * nested(axis + 1);
      const double denom = symbol(xi);
      if (!(denom > 0.0)) throw NonPositiveSymbol(xi, denom);
      return weight / denom;
    };
    return integrate_panels(integrand, 0.0, pi, panel(axis), settings);
  };
  return spectrum.params().sigma2() * nested(0) / std::pow(pi, dim);
}

double evaluate_covariance(const MaternParams& params, const CovarianceQuery& query,
                           const QuadratureSettings& settings) {
  auto need_spectrum = [&]() -> const TaylorSpectrum& {
    if (!query.spectrum) throw InvalidArgument("this covariance kind needs a Taylor spectrum");
    return *query.spectrum;
  };
  switch (query.kind) {
    case CovarianceKind::exact:
      return exact_matern(params, lag_norm(query.lag, params.dim()));
    case CovarianceKind::band_limited:
      return band_limited(params, query.lag, settings);
    case CovarianceKind::taylor:
      return taylor_covariance(need_spectrum(), query.lag, settings);
    case CovarianceKind::discrete: {
      require_step(query.h);
      std::vector<int> index;
      for (double x : query.lag) {
        const double u = x / query.h;
        const double rounded = std::round(u);
        if (std::fabs(u - rounded) > 1e-9 * std::max(1.0, std::fabs(u))) {
          std::ostringstream os;
          os << "lag " << x << " is not a multiple of the lattice step " << query.h;
          throw InvalidArgument(os.str());
        }
        index.push_back(static_cast<int>(rounded));
      }
      return discrete_covariance(need_spectrum(), query.h, index, query.mode,
                                 query.frequency_points);
    }
    case CovarianceKind::interpolated:
      return interpolated_covariance(need_spectrum(), query.h, query.lag, query.mode, settings);
  }
  throw InvalidArgument("unknown covariance kind");
}

}  // namespace fracgmrf
