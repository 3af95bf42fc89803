#pragma once

#include <span>
#include <string>
#include <vector>

namespace fracgmrf {

/// Continuous Matérn model: smoothness alpha, inverse length kappa, scale sigma2
/// on R^d. Requires alpha > d/2.
class MaternParams {
 public:
  MaternParams(double alpha, double kappa, double sigma2, int dim);

  double alpha() const noexcept { return alpha_; }
  double kappa() const noexcept { return kappa_; }
  double sigma2() const noexcept { return sigma2_; }
  int dim() const noexcept { return dim_; }
  /// Bessel order alpha - d/2.
  double nu() const noexcept { return alpha_ - 0.5 * dim_; }

 private:
  double alpha_;
  double kappa_;
  double sigma2_;
  int dim_;
};

enum class Positivity { positive_everywhere, positive_on_ball, invalid };

std::string to_string(Positivity p);

struct PositivityStatus {
  Positivity kind = Positivity::invalid;
  /// First zero of the truncated polynomial for positive_on_ball, else 0.
  double radius = 0.0;
  /// Minimum of sum_k c_k t^{2k} over the audit grid.
  double grid_min = 0.0;
};

/// Audit grid for positivity checks: `points` uniform samples of |xi| on
/// [0, radius_factor * kappa].
struct AuditGrid {
  double radius_factor = 100.0;
  int points = 10000;
};

/// Truncated Taylor expansion of (kappa^2 + t^2)^alpha:
///   sum_{k<=K} a_k kappa^{2(alpha-k)} t^{2k} = sum_k c_k t^{2k}.
class TaylorSpectrum {
 public:
  TaylorSpectrum(MaternParams params, int order, const AuditGrid& audit = {});

  const MaternParams& params() const noexcept { return params_; }
  int order() const noexcept { return static_cast<int>(a_.size()) - 1; }
  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> c() const noexcept { return c_; }
  const PositivityStatus& positivity() const noexcept { return positivity_; }

  /// Largest k with a_k != 0 (integer alpha terminates the series).
  int effective_order() const noexcept;

  /// sum_k c_k t^{2k}.
  double evaluate(double t) const noexcept;

 private:
  MaternParams params_;
  std::vector<double> a_;
  std::vector<double> c_;
  PositivityStatus positivity_;
};

/// a_0..a_K of the binomial series, by the ratio a_k = a_{k-1} (alpha-k+1)/k.
std::vector<double> taylor_raw_coefficients(double alpha, int order);

TaylorSpectrum taylor_coefficients(const MaternParams& params, int order,
                                   const AuditGrid& audit = {});

/// K = floor(alpha) + 2J + 1, the order carrying the positivity certificate.
int select_order(const MaternParams& params, int J);

/// Smallest K >= min_order with a_K > 0. For integer alpha with
/// min_order > alpha this returns alpha (the series terminates).
int select_order_leading_positive(const MaternParams& params, int min_order);

PositivityStatus check_positivity(const TaylorSpectrum& spectrum,
                                  double audit_radius, int grid_points);

/// Dense coefficient list in t: value = sum_i coeffs[i] t^i.
struct Polynomial {
  std::vector<double> coeffs;
  double operator()(double t) const noexcept;
};

/// Grouping of the truncated series into non-negative polynomials q_0..q_J in
/// the scaled variable t = |xi| / kappa, with
///   P_K(xi) = kappa^{2 alpha} (sum_j q_j(t) + remainder_coeff t^{2K}).
struct PositivityCertificate {
  int J = 0;
  int K = 0;
  std::vector<Polynomial> q;
  double remainder_coeff = 0.0;
  /// min of P_K(|xi|) over the audit grid.
  double grid_min = 0.0;
  /// Largest c with kappa^{2 alpha} q_0(|xi|/kappa) >= c (1 + |xi|^{d+2}) on
  /// the audit grid; bounds P_K from below for every J.
  double c_lower = 0.0;
  /// deg q_0 >= d + 2, so the bound extends beyond the grid.
  bool bound_holds_at_infinity = false;
};

/// Throws NumericalError if some q_j is negative on the grid or c_lower <= 0.
PositivityCertificate lemma_decomposition(const MaternParams& params, int J,
                                          const AuditGrid& audit = {});

}  // namespace fracgmrf
