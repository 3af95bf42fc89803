#include "fracgmrf/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracgmrf {

BesselOrder::BesselOrder(double nu) : nu_(std::fabs(nu)) {
  if (!std::isfinite(nu)) throw std::domain_error("Bessel order must be finite");
}

double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("gamma: argument must be positive and finite, got " +
                            std::to_string(x));
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw std::overflow_error("gamma: overflow at " + std::to_string(x));
  return g;
}

double bessel_k(BesselOrder order, double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("bessel_k: argument must be positive and finite, got " +
                            std::to_string(x));
  }
  double k = 0.0;
  try {
    k = std::cyl_bessel_k(order.value(), x);
  } catch (const std::overflow_error&) {
    k = HUGE_VAL;
  } catch (const std::runtime_error&) {
    // libstdc++ reports non-convergence of the small-x series this way, which
    // only happens once the result is far outside double range.
    k = HUGE_VAL;
  }
  if (!std::isfinite(k)) {
    throw std::overflow_error("bessel_k: K_" + std::to_string(order.value()) + "(" +
                              std::to_string(x) + ") is not representable");
  }
  return k;
}

}  // namespace fracgmrf
