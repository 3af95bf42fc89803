#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracgmrf/covariance.hpp"
#include "fracgmrf/spectrum.hpp"

namespace fracgmrf {

/// Maximum absolute error between the lattice covariance and the exact Matérn
/// covariance over a centred target grid, as a function of the Taylor order.
struct ErrorVsOrderConfig {
  MaternParams params{3.141592653589793, 1.0, 1.0, 2};
  double h = 0.1;
  /// Physical side of the target grid; n = side / h + 1 points per axis.
  double side = 20.0;
  /// The covariance field is computed on a periodic grid boundary_factor * n.
  int boundary_factor = 2;
  int k_min = 1;
  int k_max = 8;
  std::vector<SymbolMode> modes{SymbolMode::laplacian_power, SymbolMode::separable};
};

struct ErrorVsOrderRow {
  int K = 0;
  SymbolMode mode = SymbolMode::separable;
  bool valid = false;
  double max_abs_error = 0.0;
  /// Empty when valid; otherwise why the order was skipped.
  std::string note;
};

std::vector<ErrorVsOrderRow> error_vs_order(const ErrorVsOrderConfig& config);

struct UShapeSummary {
  std::optional<int> argmin;
  /// Strictly decreasing over valid orders up to the argmin, strictly
  /// increasing after it, with valid orders on both sides.
  bool u_shaped = false;
};

UShapeSummary summarize_u_shape(const std::vector<ErrorVsOrderRow>& rows, SymbolMode mode);

/// Lattice versus continuous truncated-Taylor covariance at fixed lags as h
/// shrinks. Lattice values come from discrete_covariance when lag / h is an
/// integer and from interpolated_covariance otherwise.
struct ConvergenceRow {
  double h = 0.0;
  double lag = 0.0;
  double discrete_value = 0.0;
  double continuous_value = 0.0;
  double abs_error = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const TaylorSpectrum& spectrum,
                                              const std::vector<double>& steps,
                                              const std::vector<double>& lags,
                                              SymbolMode mode, bool force_interpolated,
                                              const QuadratureSettings& settings = {});

}  // namespace fracgmrf
