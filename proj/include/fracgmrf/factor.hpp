#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracgmrf/lattice.hpp"

namespace fracgmrf {

struct SparseEntry {
  int col;
  double value;
};

/// Upper-triangular matrix stored by rows; each non-empty row starts with its
/// diagonal and is sorted by column.
class SparseUpper {
 public:
  explicit SparseUpper(int n = 0) : rows_(static_cast<std::size_t>(n)) {}

  int size() const noexcept { return static_cast<int>(rows_.size()); }
  std::span<const SparseEntry> row(int i) const noexcept { return rows_[static_cast<std::size_t>(i)]; }
  std::vector<SparseEntry>& mutable_row(int i) noexcept { return rows_[static_cast<std::size_t>(i)]; }
  /// 0 for an empty row.
  double diagonal(int i) const noexcept;
  std::size_t nonzeros() const noexcept;

  Eigen::MatrixXd to_dense() const;

 private:
  std::vector<std::vector<SparseEntry>> rows_;
};

/// Counters for a factorization.
struct FactorStats {
  std::size_t nonzeros = 0;
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  std::size_t updates = 0;
  std::size_t downdates = 0;
};

enum class UpdateOrder {
  /// All positive-sign rows first, then all downdates.
  positives_first,
  /// Terms in order of k, each with its own sign. Can break down.
  interleaved,
};

enum class FactorForm { plain, unit_diagonal };

/// plain: R^T R = Q with diag(R) > 0.
/// unit_diagonal: L^T D L = Q with diag(L) = 1 and D = d[] > 0.
class CholeskyFactor {
 public:
  CholeskyFactor(SparseUpper upper, FactorStats stats);
  CholeskyFactor(SparseUpper unit_upper, std::vector<double> d, FactorStats stats);

  FactorForm form() const noexcept { return form_; }
  int size() const noexcept { return upper_.size(); }
  const SparseUpper& upper() const noexcept { return upper_; }
  std::span<const double> d() const noexcept { return d_; }
  const FactorStats& stats() const noexcept { return stats_; }

 private:
  FactorForm form_;
  SparseUpper upper_;
  std::vector<double> d_;
  FactorStats stats_;
};

/// Relative pivot floor for downdates.
inline constexpr double kDowndatePivotFloor = 1e-13;

/// R^T R <- R^T R + sign * v v^T for a sparse v sorted by column. sign is +1
/// or -1. A downdate that would take pivot j below kDowndatePivotFloor times its
/// old value throws FactorBreakdown (term_order -1, term_row 0).
void rank_one_modify(SparseUpper& R, std::span<const SparseEntry> v, int sign);

CholeskyFactor factor_by_updates(const PrecisionAssembly& assembly,
                                 UpdateOrder order = UpdateOrder::positives_first);

CholeskyFactor to_unit_diagonal(const CholeskyFactor& factor);

/// Solves R x = v (plain) or L x = v (unit_diagonal).
std::vector<double> solve_upper(const CholeskyFactor& factor, std::span<const double> v);
/// Solves R^T x = v (plain) or L^T x = v (unit_diagonal).
std::vector<double> solve_lower_transpose(const CholeskyFactor& factor,
                                          std::span<const double> v);

void write_coordinate(std::ostream& out, const SparseUpper& m);

}  // namespace fracgmrf
