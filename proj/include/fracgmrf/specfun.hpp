#pragma once

namespace fracgmrf {

/// Order of K_nu. Negative orders are folded with K_{-nu} = K_nu.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const noexcept { return nu_; }

 private:
  double nu_;
};

/// Gamma function for x > 0. Throws std::domain_error otherwise.
double gamma(double x);

/// Modified Bessel function of the second kind K_nu(x), x > 0.
/// Throws std::domain_error for x <= 0 and std::overflow_error when the value
/// is not representable.
double bessel_k(BesselOrder order, double x);

}  // namespace fracgmrf
