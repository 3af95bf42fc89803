#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "doctest.h"
#include "fracgmrf/covariance.hpp"
#include "fracgmrf/errors.hpp"
#include "oracles.hpp"

using namespace fracgmrf;
using std::numbers::pi;

namespace {
// Frozen from mpmath oscillatory quadrature of
// (1 / 2 pi) int rho J0(rho) (1 + rho^2)^-pi d rho; the test re-derives it
// with oracle::simpson below.
constexpr double kMatern2dAt1 = 0.030758269490607127;
// Frozen from oracle::fourier_1d((1 + x^2)^-1.5, r = 5, b = 1, 1e5 panels).
constexpr double kBandLag5 = -0.014954037570532;
// Frozen from (1 / 2 pi) int dt / P(t) with P the K = 4 example polynomial.
constexpr double kTaylorLag0 = 0.29106341691269947;

const MaternParams k1d(1.5, 1.0, 1.0, 1);

double p4(double t) {
  const double u = t * t;
  return 1.0 + 1.5 * u + 0.375 * u * u - u * u * u / 16.0 + 3.0 * u * u * u * u / 128.0;
}

std::vector<double> v(double x) { return {x}; }
}  // namespace

TEST_CASE("exact variance in one dimension") {
  CHECK(std::fabs(exact_matern(k1d, 0.0) - 1.0 / pi) < 1e-12);
  // Closed-form antiderivative x / sqrt(1 + x^2) of (1 + x^2)^{-3/2}.
  const double tail = 1.0 - 200.0 / std::sqrt(1.0 + 200.0 * 200.0);
  const double simpson = oracle::simpson([](double x) { return std::pow(1 + x * x, -1.5); },
                                         -200.0, 200.0, 400000);
  CHECK(std::fabs((simpson + 2 * tail) / (2 * pi) - 1.0 / pi) < 1e-10);
  CHECK(exact_matern(k1d, 200.0) < 1e-80);
  CHECK(exact_matern(k1d, 1e4) == 0.0);
  CHECK_THROWS_AS(exact_matern(k1d, -1.0), InvalidArgument);
}

TEST_CASE("closed form agrees with the spectral definition") {
  for (int d = 1; d <= 3; ++d) {
    for (double alpha : {0.5 * d + 0.3, 0.5 * d + 1.0, std::numbers::pi}) {
      const MaternParams p(alpha, 1.3, 0.7, d);
      for (double r : {0.0, 0.5, 1.0, 2.0}) {
        CAPTURE(d);
        CAPTURE(alpha);
        CAPTURE(r);
        if (r == 0.0 && alpha - 0.5 * d < 0.5) continue;  // slow tail at the origin
        const double e = exact_matern(p, r);
        CHECK(std::fabs(spectral_matern(p, r, {}) - e) < 1e-8 * std::fabs(e) + 1e-12);
      }
    }
  }
}

TEST_CASE("two-dimensional Matern at r = 1") {
  const double a = pi;
  const double s = oracle::simpson(
      [a](double r) { return r * std::cyl_bessel_j(0.0, r) * std::pow(1 + r * r, -a); }, 0.0,
      80.0, 200000);
  CHECK(std::fabs(s / (2 * pi) - kMatern2dAt1) < 1e-9);
  const MaternParams p(pi, 1.0, 1.0, 2);
  CHECK(std::fabs(exact_matern(p, 1.0) - kMatern2dAt1) < 1e-12);
}

TEST_CASE("band-limited values") {
  CHECK(std::fabs(band_limited(k1d, v(0.0)) - 1.0 / (std::sqrt(2.0) * pi)) < 1e-12);
  const double oracle5 =
      oracle::fourier_1d([](double x) { return std::pow(1 + x * x, -1.5); }, 5.0, 1.0, 100000);
  CHECK(std::fabs(oracle5 - kBandLag5) < 1e-12);
  CHECK(std::fabs(band_limited(k1d, v(5.0)) - kBandLag5) < 1e-10);
  for (double r = 0.25; r < 12.0; r += 0.75) {
    CHECK(std::fabs(band_limited(k1d, v(r))) <= band_limited(k1d, v(0.0)));
  }
  CHECK(band_limited(k1d, v(0.0)) < exact_matern(k1d, 0.0));
  const MaternParams p2(pi, 1.0, 1.0, 2);
  CHECK(band_limited(p2, std::vector<double>{0.0, 0.0}) < exact_matern(p2, 0.0));
  // Isotropy.
  CHECK(band_limited(p2, std::vector<double>{0.6, 0.8}) ==
        doctest::Approx(band_limited(p2, std::vector<double>{1.0, 0.0})).epsilon(1e-12));
}

TEST_CASE("truncated Taylor covariance") {
  const auto s = taylor_coefficients(k1d, 4);
  const double oracle0 = oracle::simpson([](double t) { return 1.0 / p4(t); }, -400.0, 400.0,
                                         800000) / (2 * pi);
  CHECK(std::fabs(oracle0 - kTaylorLag0) < 1e-9);
  CHECK(std::fabs(taylor_covariance(s, v(0.0)) - kTaylorLag0) < 1e-10);
  for (double r : {0.3, 1.0, 2.7}) {
    CHECK(taylor_covariance(s, v(r)) == doctest::Approx(taylor_covariance(s, v(-r))).epsilon(1e-13));
    const double o = oracle::fourier_1d([](double t) { return 1.0 / p4(t); }, r, 400.0, 800000);
    CHECK(std::fabs(taylor_covariance(s, v(r)) - o) < 1e-8);
  }
  // Closer to the exact covariance than the band-limited one, uniformly over lags.
  double worst_taylor = 0.0;
  double worst_band = 0.0;
  for (double r = 0.0; r <= 5.0; r += 0.5) {
    const double e = exact_matern(k1d, r);
    worst_taylor = std::max(worst_taylor, std::fabs(taylor_covariance(s, v(r)) - e));
    worst_band = std::max(worst_band, std::fabs(band_limited(k1d, v(r)) - e));
  }
  CHECK(worst_taylor < worst_band);

  CHECK_THROWS_AS(taylor_covariance(taylor_coefficients(k1d, 3), v(0.0)), InvalidArgument);
  // Order 0 is positive but not integrable in one dimension.
  CHECK_THROWS_AS(taylor_covariance(taylor_coefficients(k1d, 0), v(0.0)), InvalidArgument);
}

TEST_CASE("Taylor covariance over a ball") {
  const auto k3 = taylor_coefficients(k1d, 3);
  const double radius = k3.positivity().radius;
  const double ball = taylor_covariance_on_ball(k3, v(0.0), 0.9 * radius, {});
  const double o = oracle::simpson(
      [&](double t) { return 1.0 / k3.evaluate(t); }, -0.9 * radius, 0.9 * radius, 200000);
  CHECK(std::fabs(ball - o / (2 * pi)) < 1e-10);
  CHECK_THROWS_AS(taylor_covariance_on_ball(k3, v(0.0), 1.1 * radius, {}), InvalidArgument);
  // Over the unit ball the K = 4 polynomial gives close to the band-limited value.
  const auto k8 = taylor_coefficients(k1d, 8);
  CHECK(std::fabs(taylor_covariance_on_ball(k8, v(0.0), 1.0, {}) - band_limited(k1d, v(0.0))) <
        1e-3);
}

TEST_CASE("discrete covariance basics") {
  const auto k0 = taylor_coefficients(MaternParams(1.5, 1.3, 2.0, 1), 0);
  const double h = 0.2;
  const int zero[] = {0};
  const int one[] = {1};
  CHECK(discrete_covariance(k0, h, zero, SymbolMode::separable) ==
        doctest::Approx(2.0 / (std::pow(1.3, 3.0) * h)).epsilon(1e-13));
  CHECK(std::fabs(discrete_covariance(k0, h, one, SymbolMode::separable)) < 1e-14);

  const auto s = taylor_coefficients(k1d, 4);
  for (int lag : {0, 1, 5}) {
    const int l[] = {lag};
    CHECK(discrete_covariance(s, 0.1, l, SymbolMode::separable) ==
          discrete_covariance(s, 0.1, l, SymbolMode::laplacian_power));
  }

  // The Riemann sum is converged: doubling the frequency grid changes nothing.
  const int l3[] = {3};
  CHECK(discrete_covariance(s, 0.1, l3, SymbolMode::separable, 1024) ==
        doctest::Approx(discrete_covariance(s, 0.1, l3, SymbolMode::separable, 2048))
            .epsilon(1e-12));

  // h -> 0 approaches the continuous truncated covariance.
  const double target = taylor_covariance(s, v(0.0));
  double prev = INFINITY;
  for (double step : {0.4, 0.2, 0.1, 0.05}) {
    const double err = std::fabs(discrete_covariance(s, step, zero, SymbolMode::separable) - target);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("symbol modes differ for d >= 2 and k >= 2") {
  const auto s = taylor_coefficients(MaternParams(pi, 1.0, 1.0, 2), 4);
  const DiscreteSymbol sep(s, 0.1, SymbolMode::separable);
  const DiscreteSymbol lap(s, 0.1, SymbolMode::laplacian_power);
  const double axis[] = {0.7, 0.0};
  const double diag[] = {0.5, 0.5};
  CHECK(sep(axis) == doctest::Approx(lap(axis)).epsilon(1e-14));
  CHECK(sep(diag) != doctest::Approx(lap(diag)).epsilon(1e-6));

  // Laplacian power tends to |xi|^{2k} as h -> 0; separable does not.
  const auto k2 = taylor_coefficients(MaternParams(pi, 1.0, 1.0, 2), 2);
  const double h = 1e-3;
  const double xi[] = {h * 3.0, h * 4.0};
  const DiscreteSymbol lap2(k2, h, SymbolMode::laplacian_power);
  const DiscreteSymbol sep2(k2, h, SymbolMode::separable);
  const double cont = k2.evaluate(5.0) * h * h;
  CHECK(lap2(xi) == doctest::Approx(cont).epsilon(1e-4));
  CHECK(std::fabs(sep2(xi) / cont - 1.0) > 1e-2);
}

TEST_CASE("Jordan inequality for the discrete symbol") {
  for (double h : {1.0, 0.3, 0.05}) {
    for (int i = 1; i < 2000; ++i) {
      const double xi = (pi / h) * (-1.0 + 2.0 * i / 2000.0);
      const double lhs = (2.0 - 2.0 * std::cos(h * xi)) / (h * h);
      CHECK(lhs >= 4.0 * xi * xi / (pi * pi) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("non-positive lattice symbol names the frequency") {
  const auto k3 = taylor_coefficients(k1d, 3);
  const int zero[] = {0};
  try {
    discrete_covariance(k3, 0.1, zero, SymbolMode::separable);
    FAIL("expected a non-positive symbol");
  } catch (const NonPositiveSymbol& e) {
    REQUIRE(e.frequency().size() == 1);
    CHECK(std::fabs(e.frequency()[0]) <= pi);
    CHECK(e.value() <= 0.0);
  }
}

TEST_CASE("interpolated covariance") {
  const auto s = taylor_coefficients(k1d, 4);
  const double h = 0.2;
  std::vector<double> samples;
  for (int j = 0; j <= 400; ++j) {
    const int l[] = {j};
    samples.push_back(discrete_covariance(s, h, l, SymbolMode::separable, 4096));
  }
  for (int j : {0, 1, 3, 7}) {
    CHECK(std::fabs(interpolated_covariance(s, h, v(j * h), SymbolMode::separable, {}) -
                    samples[j]) < 1e-9);
  }
  for (double u : {0.5, 1.25, 2.6, 9.3}) {
    CAPTURE(u);
    const double interp = interpolated_covariance(s, h, v(u * h), SymbolMode::separable, {});
    CHECK(std::fabs(interp - oracle::sinc_interpolate(samples, u)) < 2e-6);
  }
  CHECK(interpolated_covariance(s, h, v(0.0), SymbolMode::separable, {}) > 0.0);

  // Fixed non-lattice lag converges to the continuous value as h shrinks.
  const double target = taylor_covariance(s, v(0.75));
  double prev = INFINITY;
  for (double step : {0.4, 0.2, 0.1, 0.05}) {
    const double err =
        std::fabs(interpolated_covariance(s, step, v(0.75), SymbolMode::separable, {}) - target);
    CHECK(err < prev);
    prev = err;
  }

  // Two-dimensional lattice lag reproduces the discrete value.
  const auto s2 = taylor_coefficients(MaternParams(pi, 1.0, 1.0, 2), 4);
  const int l2[] = {2, 1};
  CHECK(std::fabs(interpolated_covariance(s2, 0.5, std::vector<double>{1.0, 0.5},
                                          SymbolMode::laplacian_power, {}) -
                  discrete_covariance(s2, 0.5, l2, SymbolMode::laplacian_power)) < 1e-9);
}

TEST_CASE("Gram matrices are positive semi-definite") {
  const auto s = taylor_coefficients(k1d, 4);
  const std::vector<double> pts{0.0, 0.3, 0.9, 1.4, 2.6, 4.0};
  for (auto kind : {CovarianceKind::exact, CovarianceKind::band_limited, CovarianceKind::taylor,
                    CovarianceKind::interpolated}) {
    Eigen::MatrixXd G(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        CovarianceQuery q{kind, {pts[i] - pts[j]}, s, 0.1, SymbolMode::separable, 0};
        G(i, j) = evaluate_covariance(k1d, q);
      }
    }
    CHECK((G - G.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * G.trace());
  }
}

TEST_CASE("Taylor convergence to band-limited in J") {
  double prev = INFINITY;
  for (int J = 1; J <= 4; ++J) {
    const auto s = taylor_coefficients(k1d, select_order(k1d, J));
    double worst = 0.0;
    for (double r = 0.0; r <= 5.0; r += 0.5) {
      worst = std::max(worst, std::fabs(taylor_covariance(s, v(r)) - band_limited(k1d, v(r))));
    }
    CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("query dispatch") {
  const auto s = taylor_coefficients(k1d, 4);
  CovarianceQuery q{CovarianceKind::discrete, {0.3}, s, 0.1, SymbolMode::separable, 0};
  const int l[] = {3};
  CHECK(evaluate_covariance(k1d, q) == discrete_covariance(s, 0.1, l, SymbolMode::separable));
  q.lag = {0.35};
  CHECK_THROWS_AS(evaluate_covariance(k1d, q), InvalidArgument);
  q.spectrum.reset();
  q.lag = {0.3};
  CHECK_THROWS_AS(evaluate_covariance(k1d, q), InvalidArgument);
  q.kind = CovarianceKind::exact;
  q.lag = {0.3, 0.1};
  CHECK_THROWS_AS(evaluate_covariance(k1d, q), InvalidArgument);
  CHECK(parse_covariance_kind("band_limited") == CovarianceKind::band_limited);
  CHECK_THROWS_AS(parse_covariance_kind("gaussian"), InvalidArgument);
  CHECK(parse_symbol_mode(to_string(SymbolMode::laplacian_power)) == SymbolMode::laplacian_power);
  CHECK(default_symbol_mode(1) == SymbolMode::separable);
  CHECK(default_symbol_mode(2) == SymbolMode::laplacian_power);
}
