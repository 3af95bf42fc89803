#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"
#include "fracgmrf/errors.hpp"
#include "fracgmrf/factor.hpp"
#include "oracles.hpp"

using namespace fracgmrf;

namespace {
SparseUpper from_dense(const Eigen::MatrixXd& R) {
  SparseUpper out(static_cast<int>(R.rows()));
  for (int i = 0; i < R.rows(); ++i) {
    for (int j = i; j < R.cols(); ++j) {
      if (R(i, j) != 0.0) out.mutable_row(i).push_back({j, R(i, j)});
    }
  }
  return out;
}

std::vector<SparseEntry> entries(std::initializer_list<double> values) {
  std::vector<SparseEntry> v;
  int col = 0;
  for (double x : values) v.push_back({col++, x});
  return v;
}

double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

PrecisionAssembly single_term(const Eigen::MatrixXd& G) {
  PrecisionAssembly a{LatticeGrid(1, 1.0, {std::max(3, static_cast<int>(G.cols()))}),
                      SymbolMode::separable, {}, 1.0, {}};
  SparseFactorTerm t;
  t.k = 1;
  t.weight = 1.0;
  t.sign = 1;
  t.G = G.sparseView();
  a.Q = SparseMatrix(t.G.transpose()) * t.G;
  a.terms.push_back(t);
  return a;
}
}  // namespace

TEST_CASE("hand factorization of a 2x2 matrix") {
  // Rows (1, -1), (1, 0), (0, 1) give G^T G = [[2, -1], [-1, 2]].
  Eigen::MatrixXd stacked(3, 2);
  stacked << 1, -1, 1, 0, 0, 1;
  auto a = single_term(stacked);
  const Eigen::MatrixXd Q(a.Q);
  Eigen::MatrixXd expectQ(2, 2);
  expectQ << 2, -1, -1, 2;
  REQUIRE((Q - expectQ).norm() == 0.0);

  const auto f = factor_by_updates(a);
  Eigen::MatrixXd expect(2, 2);
  expect << std::sqrt(2.0), -1 / std::sqrt(2.0), 0, std::sqrt(1.5);
  CHECK((f.upper().to_dense() - expect).norm() < 1e-15);
  CHECK(f.stats().updates == 3);
  CHECK(f.stats().downdates == 0);

  const auto u = to_unit_diagonal(f);
  Eigen::MatrixXd L(2, 2);
  L << 1, -0.5, 0, 1;
  CHECK((u.upper().to_dense() - L).norm() < 1e-15);
  CHECK(u.d()[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(u.d()[1] == doctest::Approx(1.5).epsilon(1e-15));
  Eigen::MatrixXd back = u.upper().to_dense();
  for (int i = 0; i < 2; ++i) back.row(i) *= std::sqrt(u.d()[i]);
  CHECK((back - f.upper().to_dense()).norm() < 1e-14);

  const double v[] = {0.0, std::sqrt(1.5)};
  const auto x = solve_upper(f, v);
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("downdate of a diagonal factor") {
  SparseUpper R = from_dense(std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2));
  rank_one_modify(R, entries({1.0, 0.0}), -1);
  Eigen::MatrixXd expect(2, 2);
  expect << 1, 0, 0, std::sqrt(2.0);
  CHECK((R.to_dense() - expect).norm() < 1e-15);
}

TEST_CASE("rank-one update and downdate against dense oracles") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 6;
    Eigen::MatrixXd B(n + 2, n);
    for (int i = 0; i < B.rows(); ++i) {
      for (int j = 0; j < n; ++j) B(i, j) = n01(rng);
    }
    const Eigen::MatrixXd A = B.transpose() * B + Eigen::MatrixXd::Identity(n, n);
    SparseUpper R = from_dense(oracle::cholesky_upper(A));
    Eigen::VectorXd v(n);
    std::vector<SparseEntry> sv;
    for (int j = 0; j < n; ++j) {
      v(j) = (j % 3 == 1) ? 0.0 : n01(rng);
      sv.push_back({j, v(j)});
    }
    rank_one_modify(R, sv, +1);
    const Eigen::MatrixXd up = A + v * v.transpose();
    CHECK(rel_frobenius(R.to_dense(), oracle::cholesky_upper(up)) < 1e-12);
    rank_one_modify(R, sv, -1);
    CHECK(rel_frobenius(R.to_dense(), oracle::cholesky_upper(A)) < 1e-10);
  }
}

TEST_CASE("downdate breakdown is reported") {
  SparseUpper R = from_dense(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(rank_one_modify(R, entries({1.0, 0.0}), -1), FactorBreakdown);
  SparseUpper R2 = from_dense(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(rank_one_modify(R2, entries({0.6, 0.9}), -1), FactorBreakdown);
  SparseUpper empty(2);
  CHECK_THROWS_AS(rank_one_modify(empty, entries({1.0, 0.0}), -1), FactorBreakdown);
  SparseUpper R3 = from_dense(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(rank_one_modify(R3, entries({1.0}), 0), InvalidArgument);
  std::vector<SparseEntry> unsorted{{1, 1.0}, {0, 1.0}};
  CHECK_THROWS_AS(rank_one_modify(R3, unsorted, 1), InvalidArgument);
}

TEST_CASE("order matters: premature downdate breaks down") {
  // Terms +I, -1.5 e1 e1^T, +I in this order. Positives first gives
  // diag(0.5, 2); interleaved hits 1 - 1.5 < 0 at the first pivot.
  PrecisionAssembly a{LatticeGrid(1, 1.0, {3}), SymbolMode::separable, {}, 1.0, {}};
  auto add = [&](const Eigen::MatrixXd& G, double weight, int sign) {
    SparseFactorTerm t;
    t.k = static_cast<int>(a.terms.size());
    t.weight = weight;
    t.sign = sign;
    t.G = G.sparseView();
    a.terms.push_back(t);
  };
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(1, 3);
  e1(0, 0) = 1.0;
  add(Eigen::MatrixXd::Identity(3, 3), 1.0, 1);
  add(e1, 1.5, -1);
  add(Eigen::MatrixXd::Identity(3, 3), 1.0, 1);
  Eigen::MatrixXd Q = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  Q(0, 0) = 0.5;
  a.Q = Q.sparseView();

  const auto good = factor_by_updates(a, UpdateOrder::positives_first);
  CHECK(good.upper().diagonal(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  try {
    factor_by_updates(a, UpdateOrder::interleaved);
    FAIL("interleaved order should break down");
  } catch (const FactorBreakdown& e) {
    CHECK(e.term_order() == 1);
    CHECK(e.pivot() == 0);
  }
}

TEST_CASE("assembled precision: updates match the dense oracle") {
  struct Case {
    double alpha;
    int dim;
    std::vector<int> n;
    double h;
    int J;
    SymbolMode mode;
  };
  const double pi = std::numbers::pi;
  const std::vector<Case> cases{
      {1.5, 1, {8}, 0.5, 1, SymbolMode::separable},
      {1.5, 1, {32}, 0.25, 2, SymbolMode::separable},
      {2.5, 1, {16}, 0.5, 1, SymbolMode::laplacian_power},
      {pi, 2, {5, 6}, 0.5, 1, SymbolMode::laplacian_power},
      {pi, 2, {6, 6}, 0.5, 1, SymbolMode::separable},
      {1.5, 2, {8, 8}, 0.5, 2, SymbolMode::laplacian_power},
  };
  for (const auto& c : cases) {
    CAPTURE(c.alpha);
    CAPTURE(c.dim);
    const auto s = taylor_coefficients(MaternParams(c.alpha, 1.0, 0.8, c.dim),
                                       select_order(MaternParams(c.alpha, 1.0, 0.8, c.dim), c.J));
    const auto a = assemble_precision(s, LatticeGrid(c.dim, c.h, c.n), c.mode);
    const auto f = factor_by_updates(a);
    const Eigen::MatrixXd R = f.upper().to_dense();
    const Eigen::MatrixXd Q(a.Q);
    CHECK(rel_frobenius(R, oracle::cholesky_upper(Q)) < 1e-8);
    CHECK(rel_frobenius(R.transpose() * R, Q) < 1e-10);
    CHECK(f.stats().min_diagonal > 0.0);
    CHECK(f.stats().nonzeros <= static_cast<std::size_t>(Q.rows() * (Q.rows() + 1) / 2));

    const auto u = to_unit_diagonal(f);
    const Eigen::MatrixXd L = u.upper().to_dense();
    Eigen::VectorXd d(L.rows());
    for (int i = 0; i < d.size(); ++i) d(i) = u.d()[i];
    CHECK(L.diagonal().isOnes(0.0));
    CHECK(rel_frobenius(L.transpose() * d.asDiagonal() * L, Q) < 1e-10);
  }
}

TEST_CASE("white-noise factor") {
  const MaternParams p(1.5, 1.2, 0.5, 1);
  const auto a = assemble_precision(taylor_coefficients(p, 0), LatticeGrid(1, 0.2, {6}),
                                    SymbolMode::separable);
  const auto f = factor_by_updates(a);
  const double expect = std::sqrt(std::pow(1.2, 3.0) * 0.2 / 0.5);
  for (int i = 0; i < 6; ++i) CHECK(f.upper().diagonal(i) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(f.stats().nonzeros == 6);
}

TEST_CASE("banded precision keeps a banded factor away from the wrap") {
  const auto s = taylor_coefficients(MaternParams(1.5, 1.0, 1.0, 1), 4);
  const auto a = assemble_precision(s, LatticeGrid(1, 0.1, {40}), SymbolMode::separable);
  const auto f = factor_by_updates(a);
  // Rows above the wrap-around corner have the stencil bandwidth only.
  for (int i = 0; i < 40 - 8; ++i) {
    for (const auto& e : f.upper().row(i)) {
      CHECK((e.col - i <= 4 || e.col >= 40 - 4));
    }
  }
}

TEST_CASE("triangular solves") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd B(10, 8);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 8; ++j) B(i, j) = n01(rng);
  }
  const Eigen::MatrixXd A = B.transpose() * B;
  const CholeskyFactor f(from_dense(oracle::cholesky_upper(A)), {});
  Eigen::VectorXd v(8);
  for (int i = 0; i < 8; ++i) v(i) = n01(rng);
  const Eigen::MatrixXd R = f.upper().to_dense();
  const Eigen::VectorXd Rv = R * v;
  const auto x = solve_upper(f, std::vector<double>(Rv.data(), Rv.data() + 8));
  for (int i = 0; i < 8; ++i) CHECK(std::fabs(x[i] - v(i)) < 1e-12);
  const Eigen::VectorXd Rtv = R.transpose() * v;
  const auto y = solve_lower_transpose(f, std::vector<double>(Rtv.data(), Rtv.data() + 8));
  for (int i = 0; i < 8; ++i) CHECK(std::fabs(y[i] - v(i)) < 1e-12);

  const CholeskyFactor id(from_dense(Eigen::MatrixXd::Identity(3, 3)), {});
  const std::vector<double> w{1.5, -2.0, 3.0};
  CHECK(solve_upper(id, w) == w);
  CHECK_THROWS_AS(solve_upper(id, std::vector<double>{1.0}), InvalidArgument);
  const CholeskyFactor singular(SparseUpper(2), {});
  CHECK_THROWS_AS(solve_upper(singular, std::vector<double>{1.0, 1.0}), NumericalError);
}

TEST_CASE("factor export") {
  const CholeskyFactor f(from_dense(Eigen::MatrixXd::Identity(2, 2)), {});
  std::ostringstream os;
  write_coordinate(os, f.upper());
  CHECK(os.str() == "0 0 1\n1 1 1\n");
}
