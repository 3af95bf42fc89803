#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracgmrf/factor.hpp"
#include "fracgmrf/lattice.hpp"

namespace fracgmrf {

struct FieldRealization {
  LatticeGrid grid;
  /// Values on the target grid, lexicographic.
  std::vector<double> values;
  std::uint64_t seed = 0;
  int index = 0;
};

/// Standard normal draws for realization `index` of stream `seed`:
/// std::mt19937_64 seeded through std::seed_seq{seed lo, seed hi, index},
/// 53-bit uniforms, Box-Muller in pairs. Reproducible on any conforming
/// standard library.
std::vector<double> standard_normals(std::uint64_t seed, int index, std::size_t count);

/// X = R^{-1} z (plain) or X = L^{-1} (z / sqrt(D)) (unit_diagonal), so that
/// Cov(X) = Q^{-1}. The factor lives on grid.working_grid(); the returned
/// values are cropped to the target grid.
std::vector<FieldRealization> sample_field_serial(const CholeskyFactor& factor,
                                                  const LatticeGrid& grid,
                                                  std::uint64_t seed, int count);
std::vector<FieldRealization> sample_field_omp(const CholeskyFactor& factor,
                                               const LatticeGrid& grid,
                                               std::uint64_t seed, int count);
std::vector<FieldRealization> sample_field(const CholeskyFactor& factor,
                                           const LatticeGrid& grid, std::uint64_t seed,
                                           int count);

/// Exact sampler for the same discrete field using the circulant structure of
/// the periodic precision: X = F^{-1}(lambda^{-1/2} F z). For working grids too
/// large for the update-based factor.
std::vector<FieldRealization> sample_field_spectral(const TaylorSpectrum& spectrum,
                                                    const LatticeGrid& grid,
                                                    SymbolMode mode, std::uint64_t seed,
                                                    int count);

/// Sample covariance of a set of realizations. On periodic grids the estimate
/// is averaged over translations and stored as a lag field; otherwise it is a
/// full row-major m x m matrix.
struct EmpiricalCovariance {
  bool translation_averaged = false;
  std::vector<int> extents;
  std::vector<double> values;
  std::vector<double> standard_errors;
  std::size_t count = 0;

  /// Covariance between sites i and j (flat indices).
  double at(std::size_t i, std::size_t j) const;
  double standard_error(std::size_t i, std::size_t j) const;

 private:
  std::size_t lag_index(std::size_t i, std::size_t j) const;
};

EmpiricalCovariance empirical_covariance(std::span<const FieldRealization> realizations);

}  // namespace fracgmrf
