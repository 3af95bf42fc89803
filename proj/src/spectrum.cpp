#include "fracgmrf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracgmrf/errors.hpp"

namespace fracgmrf {

MaternParams::MaternParams(double alpha, double kappa, double sigma2, int dim)
    : alpha_(alpha), kappa_(kappa), sigma2_(sigma2), dim_(dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  if (!std::isfinite(alpha) || !(alpha > 0.5 * dim)) {
    throw InvalidArgument("alpha must exceed d/2");
  }
  if (!std::isfinite(kappa) || !(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!std::isfinite(sigma2) || !(sigma2 > 0.0)) {
    throw InvalidArgument("sigma2 must be positive");
  }
}

std::string to_string(Positivity p) {
  switch (p) {
    case Positivity::positive_everywhere: return "positive_everywhere";
    case Positivity::positive_on_ball: return "positive_on_ball";
    case Positivity::invalid: return "invalid";
  }
  return "invalid";
}

std::vector<double> taylor_raw_coefficients(double alpha, int order) {
  if (order < 0) throw InvalidArgument("Taylor order must be non-negative");
  std::vector<double> a(static_cast<std::size_t>(order) + 1);
  a[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    a[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k - 1)] * (alpha - k + 1) / k;
  }
  return a;
}

TaylorSpectrum::TaylorSpectrum(MaternParams params, int order, const AuditGrid& audit)
    : params_(params), a_(taylor_raw_coefficients(params.alpha(), order)) {
  c_.resize(a_.size());
  for (std::size_t k = 0; k < a_.size(); ++k) {
    c_[k] = a_[k] * std::pow(params_.kappa(), 2.0 * (params_.alpha() - static_cast<double>(k)));
  }
  positivity_ = check_positivity(*this, audit.radius_factor * params_.kappa(), audit.points);
}

int TaylorSpectrum::effective_order() const noexcept {
  for (int k = order(); k > 0; --k) {
    if (a_[static_cast<std::size_t>(k)] != 0.0) return k;
  }
  return 0;
}

double TaylorSpectrum::evaluate(double t) const noexcept {
  const double u = t * t;
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

TaylorSpectrum taylor_coefficients(const MaternParams& params, int order,
                                   const AuditGrid& audit) {
  return TaylorSpectrum(params, order, audit);
}

int select_order(const MaternParams& params, int J) {
  if (J < 1) throw InvalidArgument("J must be at least 1");
  return static_cast<int>(std::floor(params.alpha())) + 2 * J + 1;
}

int select_order_leading_positive(const MaternParams& params, int min_order) {
  if (min_order < 0) throw InvalidArgument("order must be non-negative");
  const double alpha = params.alpha();
  if (alpha == std::floor(alpha) && min_order >= alpha) return static_cast<int>(alpha);
  // Signs alternate past floor(alpha) + 1, so a positive coefficient is at most
  // two steps away.
  const auto a = taylor_raw_coefficients(alpha, min_order + 2);
  for (int k = min_order; k <= min_order + 2; ++k) {
    if (a[static_cast<std::size_t>(k)] > 0.0) return k;
  }
  throw NumericalError("no positive leading coefficient found");
}

PositivityStatus check_positivity(const TaylorSpectrum& spectrum, double audit_radius,
                                  int grid_points) {
  const double kappa = spectrum.params().kappa();
  if (!(audit_radius >= kappa)) throw InvalidArgument("audit radius must be at least kappa");
  if (grid_points < 1000) throw InvalidArgument("audit grid needs at least 1000 points");

  PositivityStatus status;
  status.grid_min = std::numeric_limits<double>::infinity();
  double first_bad = -1.0;
  double last_good = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = audit_radius * i / (grid_points - 1);
    const double v = spectrum.evaluate(t);
    status.grid_min = std::min(status.grid_min, v);
    if (v <= 0.0 && first_bad < 0.0) first_bad = t;
    if (first_bad < 0.0) last_good = t;
  }

  const double lead = spectrum.a()[static_cast<std::size_t>(spectrum.effective_order())];
  if (lead > 0.0) {
    status.kind = status.grid_min > 0.0 ? Positivity::positive_everywhere : Positivity::invalid;
    return status;
  }
  if (spectrum.evaluate(0.0) <= 0.0) return status;

  // Negative leading term: locate the first root, searching past the grid if
  // the polynomial stays positive on it.
  double lo = last_good;
  double hi = first_bad;
  if (hi < 0.0) {
    hi = audit_radius;
    while (spectrum.evaluate(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spectrum.evaluate(mid) > 0.0 ? lo : hi) = mid;
  }
  status.radius = lo;
  status.kind = lo >= kappa ? Positivity::positive_on_ball : Positivity::invalid;
  return status;
}

double Polynomial::operator()(double t) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

PositivityCertificate lemma_decomposition(const MaternParams& params, int J,
                                          const AuditGrid& audit) {
  if (audit.points < 1000 || !(audit.radius_factor >= 1.0)) {
    throw InvalidArgument("audit grid too small");
  }
  PositivityCertificate cert;
  cert.J = J;
  cert.K = select_order(params, J);
  const int base = static_cast<int>(std::floor(params.alpha()));
  const auto a = taylor_raw_coefficients(params.alpha(), cert.K);
  auto coef = [&](int k) { return a[static_cast<std::size_t>(k)]; };

  Polynomial q0;
  q0.coeffs.assign(static_cast<std::size_t>(2 * (base + 1)) + 1, 0.0);
  for (int k = 0; k <= base; ++k) q0.coeffs[static_cast<std::size_t>(2 * k)] = coef(k);
  q0.coeffs[static_cast<std::size_t>(2 * (base + 1))] = 0.5 * coef(base + 1);
  cert.q.push_back(std::move(q0));

  for (int j = 1; j <= J; ++j) {
    const int m = base + 2 * j;
    Polynomial qj;
    qj.coeffs.assign(static_cast<std::size_t>(2 * (m + 1)) + 1, 0.0);
    qj.coeffs[static_cast<std::size_t>(2 * (m - 1))] = 0.5 * coef(m - 1);
    qj.coeffs[static_cast<std::size_t>(2 * m)] = coef(m);
    qj.coeffs[static_cast<std::size_t>(2 * (m + 1))] = 0.5 * coef(m + 1);
    cert.q.push_back(std::move(qj));
  }
  cert.remainder_coeff = 0.5 * coef(cert.K);

  const TaylorSpectrum spectrum(params, cert.K, audit);
  const double kappa = params.kappa();
  const double scale = std::pow(kappa, 2.0 * params.alpha());
  const double d = params.dim();
  cert.bound_holds_at_infinity = 2 * (base + 1) >= params.dim() + 2;

  cert.grid_min = std::numeric_limits<double>::infinity();
  cert.c_lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i < audit.points; ++i) {
    const double t = audit.radius_factor * i / (audit.points - 1);
    const double xi = kappa * t;
    for (std::size_t j = 0; j < cert.q.size(); ++j) {
      const double v = cert.q[j](t);
      if (v < 0.0) {
        std::ostringstream os;
        os << "q_" << j << "(" << t << ") = " << v << " is negative";
        throw NumericalError(os.str());
      }
    }
    cert.grid_min = std::min(cert.grid_min, spectrum.evaluate(xi));
    cert.c_lower = std::min(cert.c_lower, scale * cert.q[0](t) / (1.0 + std::pow(xi, d + 2)));
  }
  if (!(cert.c_lower > 0.0)) throw NumericalError("lower-bound constant is not positive");

  for (int i = 0; i < audit.points; ++i) {
    const double xi = kappa * audit.radius_factor * i / (audit.points - 1);
    const double bound = cert.c_lower * (1.0 + std::pow(xi, d + 2));
    if (spectrum.evaluate(xi) < bound * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "truncated spectrum falls below the fitted bound at |xi| = " << xi;
      throw NumericalError(os.str());
    }
  }
  return cert;
}

}  // namespace fracgmrf
