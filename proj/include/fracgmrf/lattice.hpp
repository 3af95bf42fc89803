#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "fracgmrf/covariance.hpp"
#include "fracgmrf/spectrum.hpp"

namespace fracgmrf {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// periodic: the grid wraps. periodic_extended(f): the target grid is embedded
/// at the origin corner of a periodic grid f times larger per axis, and results
/// are cropped back to the target.
struct Boundary {
  enum class Kind { periodic, periodic_extended };
  Kind kind = Kind::periodic;
  int factor = 1;

  static Boundary periodic() { return {}; }
  static Boundary periodic_extended(int factor);
};

class LatticeGrid {
 public:
  LatticeGrid(int dim, double h, std::vector<int> extents, Boundary boundary = {});

  int dim() const noexcept { return dim_; }
  double step() const noexcept { return h_; }
  std::span<const int> extents() const noexcept { return extents_; }
  const Boundary& boundary() const noexcept { return boundary_; }
  std::size_t size() const noexcept;

  /// Extents of the periodic grid the operators live on.
  std::vector<int> working_extents() const;
  std::size_t working_size() const noexcept;
  /// The working grid as a plain periodic grid.
  LatticeGrid working_grid() const;

  /// Lexicographic flat index (last axis fastest) on the working grid, with
  /// periodic wrap of each coordinate.
  std::size_t working_index(std::span<const int> multi) const;

  /// Restrict values on the working grid to the target grid.
  std::vector<double> crop(std::span<const double> working_values) const;

 private:
  int dim_;
  double h_;
  std::vector<int> extents_;
  Boundary boundary_;
};

using Offset = std::array<int, 3>;

/// Translation-invariant operator (G x)_i = sum_o coeff[o] x_{i+o}.
struct Stencil {
  std::map<Offset, double> coeff;

  static Stencil identity();
  /// (delta_0 - delta_{-e_axis})^{*k}
  static Stencil backward_difference(int axis, int k);
  /// -h^2 Delta_h: 2d at the centre, -1 at the 2d neighbours.
  static Stencil negative_laplacian(int dim);

  Stencil compose(const Stencil& other) const;
};

/// One square-root operator of the precision: the rows of
/// sqrt(weight * precision_scale) * G enter the factor with the given sign.
struct SparseFactorTerm {
  int k = 0;
  /// |c_k| h^{d-2k}
  double weight = 0.0;
  int sign = 1;
  SparseMatrix G;
};

/// G only (weight 0, sign +1) on the working grid of `grid`.
SparseFactorTerm difference_operator(const LatticeGrid& grid, int k, SymbolMode mode);

/// Circulant eigenvalues of G^T G at the DFT frequencies of a periodic grid,
/// i.e. S_k(xi), lexicographic order.
std::vector<double> term_symbol(const LatticeGrid& grid, int k, SymbolMode mode);

struct PrecisionAssembly {
  LatticeGrid grid;
  SymbolMode mode;
  std::vector<SparseFactorTerm> terms;
  /// 1 / sigma2
  double precision_scale = 1.0;
  /// precision_scale * sum_terms sign * weight * G^T G on the working grid.
  SparseMatrix Q;
};

PrecisionAssembly assemble_precision(const TaylorSpectrum& spectrum,
                                     const LatticeGrid& grid, SymbolMode mode);

/// "row col value" per line, zero-based, row-major order.
void write_coordinate(std::ostream& out, const SparseMatrix& m);

}  // namespace fracgmrf
