#pragma once

#include <functional>

namespace fracgmrf {

struct QuadratureSettings {
  /// Relative tolerance for each adaptive panel and for the tail-doubling stop.
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  /// First truncation radius for infinite integrals; 0 selects 8 kappa.
  double initial_radius = 0.0;
  int max_doublings = 48;
  int max_depth = 15;
};

/// (2 pi)^{-d} \int_{a <= |xi| <= b} exp(-i r . xi) f(|xi|) dxi for isotropic f.
/// The interval is cut into panels at the half periods of the radial kernel.
double radial_fourier(const std::function<double(double)>& f, int dim, double r,
                      double a, double b, const QuadratureSettings& settings);

/// Same transform over all of R^d. The outer radius is doubled until the last
/// doubling changes the value by less than rel_tol (relative).
double radial_fourier_whole_space(const std::function<double(double)>& f, int dim,
                                  double r, double initial_radius,
                                  const QuadratureSettings& settings);

/// Adaptive Gauss-Kronrod on [a, b] split into panels of width <= panel.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double panel, const QuadratureSettings& settings);

}  // namespace fracgmrf
