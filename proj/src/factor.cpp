#include "fracgmrf/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fracgmrf/errors.hpp"
#include "fracgmrf/io.hpp"

namespace fracgmrf {
namespace {

// Dense scratch for the modification vector; x is all zeros between calls.
struct Workspace {
  std::vector<double> x;
  std::vector<int> active;
  std::vector<int> next;
  std::vector<SparseEntry> row;
};

void clear_active(Workspace& ws, std::size_t from) {
  for (std::size_t i = from; i < ws.active.size(); ++i) {
    ws.x[static_cast<std::size_t>(ws.active[i])] = 0.0;
  }
  ws.active.clear();
}

// Cholesky update (sign +1) or downdate (sign -1) of R by v, using the
// rotation-free recurrence
//   r = sqrt(R_kk^2 + sign x_k^2), c = r / R_kk, s = x_k / R_kk,
//   R_kj <- (R_kj + sign s x_j) / c,  x_j <- c x_j - s R_kj.
// Only columns where x is non-zero are visited. An empty row k takes x as its
// new content (the limit of a Givens rotation against a zero row).
void modify(SparseUpper& R, std::span<const SparseEntry> v, int sign, Workspace& ws,
            int term_order, std::size_t term_row) {
  const auto n = static_cast<std::size_t>(R.size());
  if (ws.x.size() != n) ws.x.assign(n, 0.0);
  ws.active.clear();
  for (const auto& e : v) {
    if (e.col < 0 || static_cast<std::size_t>(e.col) >= n) {
      clear_active(ws, 0);
      throw InvalidArgument("update vector index out of range");
    }
    if (e.value == 0.0) continue;
    if (!ws.active.empty() && ws.active.back() >= e.col) {
      clear_active(ws, 0);
      throw InvalidArgument("update vector must be sorted by column without duplicates");
    }
    ws.x[static_cast<std::size_t>(e.col)] = e.value;
    ws.active.push_back(e.col);
  }

  std::size_t head = 0;
  while (head < ws.active.size()) {
    const int k = ws.active[head];
    const double xk = ws.x[static_cast<std::size_t>(k)];
    ws.x[static_cast<std::size_t>(k)] = 0.0;
    if (xk == 0.0) {
      ++head;
      continue;
    }
    auto& row = R.mutable_row(k);

    if (row.empty()) {
      if (sign < 0) {
        clear_active(ws, head + 1);
        throw FactorBreakdown(term_order, term_row, static_cast<std::size_t>(k), 0.0, -xk * xk);
      }
      const double flip = xk > 0.0 ? 1.0 : -1.0;
      row.push_back({k, std::fabs(xk)});
      for (std::size_t i = head + 1; i < ws.active.size(); ++i) {
        const int j = ws.active[i];
        const double xj = ws.x[static_cast<std::size_t>(j)];
        if (xj != 0.0) row.push_back({j, flip * xj});
        ws.x[static_cast<std::size_t>(j)] = 0.0;
      }
      ws.active.clear();
      return;
    }

    const double rkk = row.front().value;
    const double r2 = rkk * rkk + sign * xk * xk;
    if (sign < 0 && (!(r2 > 0.0) || std::sqrt(r2) < kDowndatePivotFloor * rkk)) {
      clear_active(ws, head + 1);
      throw FactorBreakdown(term_order, term_row, static_cast<std::size_t>(k), rkk, r2);
    }
    const double r = std::sqrt(r2);
    const double c = r / rkk;
    const double s = xk / rkk;

    ws.row.clear();
    ws.next.clear();
    ws.row.push_back({k, r});
    std::size_t a = 1;
    std::size_t b = head + 1;
    while (a < row.size() || b < ws.active.size()) {
      int col;
      double rkj = 0.0;
      if (b >= ws.active.size() || (a < row.size() && row[a].col < ws.active[b])) {
        col = row[a].col;
        rkj = row[a++].value;
      } else if (a >= row.size() || ws.active[b] < row[a].col) {
        col = ws.active[b++];
      } else {
        col = row[a].col;
        rkj = row[a++].value;
        ++b;
      }
      double& xj = ws.x[static_cast<std::size_t>(col)];
      const double updated = (rkj + sign * s * xj) / c;
      xj = c * xj - s * updated;
      if (updated != 0.0) ws.row.push_back({col, updated});
      if (xj != 0.0) ws.next.push_back(col);
    }
    row.swap(ws.row);
    ws.active.swap(ws.next);
    head = 0;
  }
  ws.active.clear();
}

FactorStats collect_stats(const SparseUpper& R) {
  FactorStats stats;
  stats.nonzeros = R.nonzeros();
  stats.min_diagonal = std::numeric_limits<double>::infinity();
  stats.max_diagonal = 0.0;
  for (int i = 0; i < R.size(); ++i) {
    stats.min_diagonal = std::min(stats.min_diagonal, R.diagonal(i));
    stats.max_diagonal = std::max(stats.max_diagonal, R.diagonal(i));
  }
  return stats;
}

}  // namespace

double SparseUpper::diagonal(int i) const noexcept {
  const auto& r = rows_[static_cast<std::size_t>(i)];
  return r.empty() ? 0.0 : r.front().value;
}

std::size_t SparseUpper::nonzeros() const noexcept {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

Eigen::MatrixXd SparseUpper::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    for (const auto& e : row(i)) m(i, e.col) = e.value;
  }
  return m;
}

CholeskyFactor::CholeskyFactor(SparseUpper upper, FactorStats stats)
    : form_(FactorForm::plain), upper_(std::move(upper)), stats_(stats) {}

CholeskyFactor::CholeskyFactor(SparseUpper unit_upper, std::vector<double> d, FactorStats stats)
    : form_(FactorForm::unit_diagonal),
      upper_(std::move(unit_upper)),
      d_(std::move(d)),
      stats_(stats) {
  if (static_cast<int>(d_.size()) != upper_.size()) {
    throw InvalidArgument("diagonal length does not match the factor");
  }
}

void rank_one_modify(SparseUpper& R, std::span<const SparseEntry> v, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  Workspace ws;
  modify(R, v, sign, ws, -1, 0);
}

CholeskyFactor factor_by_updates(const PrecisionAssembly& assembly, UpdateOrder order) {
  const auto& terms = assembly.terms;
  if (std::none_of(terms.begin(), terms.end(), [](const auto& t) { return t.sign > 0; })) {
    throw InvalidArgument("factorization needs at least one positive term");
  }
  std::vector<const SparseFactorTerm*> sequence;
  if (order == UpdateOrder::positives_first) {
    for (const auto& t : terms) {
      if (t.sign > 0) sequence.push_back(&t);
    }
    for (const auto& t : terms) {
      if (t.sign < 0) sequence.push_back(&t);
    }
  } else {
    for (const auto& t : terms) sequence.push_back(&t);
  }

  SparseUpper R(static_cast<int>(assembly.Q.rows()));
  Workspace ws;
  FactorStats counts;
  std::vector<SparseEntry> v;
  for (const auto* term : sequence) {
    const double scale = std::sqrt(term->weight * assembly.precision_scale);
    for (Eigen::Index r = 0; r < term->G.outerSize(); ++r) {
      v.clear();
      for (SparseMatrix::InnerIterator it(term->G, r); it; ++it) {
        v.push_back({static_cast<int>(it.col()), scale * it.value()});
      }
      modify(R, v, term->sign, ws, term->k, static_cast<std::size_t>(r));
      ++(term->sign > 0 ? counts.updates : counts.downdates);
    }
  }
  for (int i = 0; i < R.size(); ++i) {
    if (!(R.diagonal(i) > 0.0)) {
      throw NumericalError("precision matrix is singular at pivot " + std::to_string(i));
    }
  }
  FactorStats stats = collect_stats(R);
  stats.updates = counts.updates;
  stats.downdates = counts.downdates;
  return CholeskyFactor(std::move(R), stats);
}

CholeskyFactor to_unit_diagonal(const CholeskyFactor& factor) {
  if (factor.form() != FactorForm::plain) {
    throw InvalidArgument("factor is already in unit-diagonal form");
  }
  const auto& R = factor.upper();
  SparseUpper L(R.size());
  std::vector<double> d(static_cast<std::size_t>(R.size()));
  for (int i = 0; i < R.size(); ++i) {
    const double diag = R.diagonal(i);
    d[static_cast<std::size_t>(i)] = diag * diag;
    auto& out = L.mutable_row(i);
    out.reserve(R.row(i).size());
    out.push_back({i, 1.0});
    for (const auto& e : R.row(i).subspan(1)) out.push_back({e.col, e.value / diag});
  }
  return CholeskyFactor(std::move(L), std::move(d), factor.stats());
}

std::vector<double> solve_upper(const CholeskyFactor& factor, std::span<const double> v) {
  const auto& U = factor.upper();
  if (static_cast<int>(v.size()) != U.size()) throw InvalidArgument("dimension mismatch");
  std::vector<double> x(v.begin(), v.end());
  for (int i = U.size() - 1; i >= 0; --i) {
    const auto row = U.row(i);
    if (row.empty() || row.front().value == 0.0) {
      throw NumericalError("zero diagonal in triangular solve at " + std::to_string(i));
    }
    double acc = x[static_cast<std::size_t>(i)];
    for (const auto& e : row.subspan(1)) acc -= e.value * x[static_cast<std::size_t>(e.col)];
    x[static_cast<std::size_t>(i)] = acc / row.front().value;
  }
  return x;
}

std::vector<double> solve_lower_transpose(const CholeskyFactor& factor,
                                          std::span<const double> v) {
  const auto& U = factor.upper();
  if (static_cast<int>(v.size()) != U.size()) throw InvalidArgument("dimension mismatch");
  std::vector<double> x(v.begin(), v.end());
  for (int i = 0; i < U.size(); ++i) {
    const auto row = U.row(i);
    if (row.empty() || row.front().value == 0.0) {
      throw NumericalError("zero diagonal in triangular solve at " + std::to_string(i));
    }
    const double xi = x[static_cast<std::size_t>(i)] / row.front().value;
    x[static_cast<std::size_t>(i)] = xi;
    for (const auto& e : row.subspan(1)) x[static_cast<std::size_t>(e.col)] -= e.value * xi;
  }
  return x;
}

void write_coordinate(std::ostream& out, const SparseUpper& m) {
  for (int i = 0; i < m.size(); ++i) {
    for (const auto& e : m.row(i)) out << i << ' ' << e.col << ' ' << format_double(e.value) << '\n';
  }
}

}  // namespace fracgmrf
