#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracgmrf/quadrature.hpp"
#include "fracgmrf/spectrum.hpp"

namespace fracgmrf {

/// Discretisations of |xi|^{2k} on the lattice. With s_p = 2 - 2 cos(xi_p):
///   separable        S_k = sum_p s_p^k
///   laplacian_power  S_k = (sum_p s_p)^k
/// Both use S_0 = 1 and coincide for d = 1 or k <= 1.
enum class SymbolMode { separable, laplacian_power };

std::string to_string(SymbolMode mode);
SymbolMode parse_symbol_mode(const std::string& name);
/// separable for d = 1, laplacian_power otherwise.
SymbolMode default_symbol_mode(int dim);

/// Frequency-grid size per axis used by discrete_covariance when none is given.
int default_frequency_points(int dim);

/// Coefficients b_k = c_k h^{d-2k} of the lattice denominator
///   D(xi) = sum_k b_k S_k(xi).
class DiscreteSymbol {
 public:
  DiscreteSymbol(const TaylorSpectrum& spectrum, double h, SymbolMode mode);

  int dim() const noexcept { return dim_; }
  double step() const noexcept { return h_; }
  double sigma2() const noexcept { return sigma2_; }
  SymbolMode mode() const noexcept { return mode_; }
  std::span<const double> coefficients() const noexcept { return b_; }

  /// D(xi) for xi in (-pi, pi)^d.
  double operator()(std::span<const double> xi) const noexcept;

 private:
  int dim_;
  double h_;
  double sigma2_;
  SymbolMode mode_;
  std::vector<double> b_;
};

enum class CovarianceKind { exact, band_limited, taylor, discrete, interpolated };

std::string to_string(CovarianceKind kind);
CovarianceKind parse_covariance_kind(const std::string& name);

/// Isotropic Matérn covariance, the inverse Fourier transform of
/// sigma2 (kappa^2 + |xi|^2)^{-alpha} / (2 pi)^d, in closed Bessel form.
double exact_matern(const MaternParams& params, double r);

/// The same covariance by direct radial quadrature of the spectral density.
double spectral_matern(const MaternParams& params, double r,
                       const QuadratureSettings& settings = {});

/// Spectral density restricted to |xi| <= kappa.
double band_limited(const MaternParams& params, std::span<const double> lag,
                    const QuadratureSettings& settings = {});

/// Reciprocal truncated Taylor polynomial integrated over R^d. Requires a
/// positive_everywhere spectrum and 2 K_eff > d.
double taylor_covariance(const TaylorSpectrum& spectrum, std::span<const double> lag,
                         const QuadratureSettings& settings = {});

/// Reciprocal truncated Taylor polynomial integrated over |xi| <= radius, for
/// spectra that are only positive on a ball.
double taylor_covariance_on_ball(const TaylorSpectrum& spectrum,
                                 std::span<const double> lag, double radius,
                                 const QuadratureSettings& settings = {});

/// Lattice covariance at integer lag, by a Riemann sum on an N^d frequency grid
/// (N = frequency_points, 0 for the default). Throws NonPositiveSymbol.
double discrete_covariance(const TaylorSpectrum& spectrum, double h,
                           std::span<const int> lag_index, SymbolMode mode,
                           int frequency_points = 0);

/// Whittaker-Shannon interpolation of the lattice covariance at a real lag.
double interpolated_covariance(const TaylorSpectrum& spectrum, double h,
                               std::span<const double> lag, SymbolMode mode,
                               const QuadratureSettings& settings = {});

/// Whole lag field of the lattice covariance on the N^d periodic grid, by FFT.
/// Index with lexicographic lag multi-indices taken mod N. This equals the
/// inverse of the periodic precision matrix on an N^d grid.
std::vector<double> discrete_covariance_field(const TaylorSpectrum& spectrum, double h,
                                              int frequency_points, SymbolMode mode);

struct CovarianceQuery {
  CovarianceKind kind = CovarianceKind::exact;
  std::vector<double> lag;
  std::optional<TaylorSpectrum> spectrum;
  double h = 0.0;
  SymbolMode mode = SymbolMode::separable;
  int frequency_points = 0;
};

/// Dispatch on query.kind. Discrete queries need lag / h to be integral.
double evaluate_covariance(const MaternParams& params, const CovarianceQuery& query,
                           const QuadratureSettings& settings = {});

}  // namespace fracgmrf
