#include "fracgmrf/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracgmrf/errors.hpp"

namespace fracgmrf {
namespace {

using boost::math::quadrature::gauss_kronrod;

double radial_kernel(int dim, double r, double rho) {
  using std::numbers::pi;
  switch (dim) {
    case 1: return std::cos(r * rho) / pi;
    case 2: return rho * std::cyl_bessel_j(0.0, r * rho) / (2.0 * pi);
    default: {
      const double x = r * rho;
      const double sinc = std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return rho * rho * sinc / (2.0 * pi * pi);
    }
  }
}

}  // namespace

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        double panel, const QuadratureSettings& settings) {
  if (!(b > a)) return 0.0;
  const double width = (panel > 0.0 && std::isfinite(panel)) ? panel : b - a;
  const auto pieces = static_cast<long>(std::ceil((b - a) / width));
  double total = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (long i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces);
    const double hi = i + 1 == pieces
                          ? b
                          : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(pieces);
    double panel_error = 0.0;
    double panel_l1 = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, lo, hi,
                                                  static_cast<unsigned>(settings.max_depth),
                                                  settings.rel_tol, &panel_error, &panel_l1);
    error += panel_error;
    l1 += panel_l1;
  }
  if (!(error <= 100.0 * settings.rel_tol * l1 + settings.abs_tol)) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] reached only " << error / l1
       << " relative accuracy (requested " << settings.rel_tol << ")";
    throw NumericalError(os.str());
  }
  return total;
}

double radial_fourier(const std::function<double(double)>& f, int dim, double r, double a,
                      double b, const QuadratureSettings& settings) {
  if (dim < 1 || dim > 3) throw InvalidArgument("radial_fourier: dimension must be 1..3");
  if (r < 0.0) r = -r;
  const double panel = r > 0.0 ? std::numbers::pi / r : 0.0;
  auto integrand = [&](double rho) { return radial_kernel(dim, r, rho) * f(rho); };
  return integrate_panels(integrand, a, b, panel, settings);
}

double radial_fourier_whole_space(const std::function<double(double)>& f, int dim, double r,
                                  double initial_radius, const QuadratureSettings& settings) {
  double radius = settings.initial_radius > 0.0 ? settings.initial_radius : initial_radius;
  double total = radial_fourier(f, dim, r, 0.0, radius, settings);
  double change = 0.0;
  for (int i = 0; i < settings.max_doublings; ++i) {
    const double added = radial_fourier(f, dim, r, radius, 2.0 * radius, settings);
    total += added;
    radius *= 2.0;
    change = std::fabs(added);
    if (change <= settings.rel_tol * std::fabs(total) + settings.abs_tol) return total;
  }
  std::ostringstream os;
  os << "tail truncation did not converge: last doubling to radius " << radius
     << " changed the value by " << change / std::fabs(total) << " (relative)";
  throw NumericalError(os.str());
}

}  // namespace fracgmrf
