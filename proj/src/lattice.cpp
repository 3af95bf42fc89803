#include "fracgmrf/lattice.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "fracgmrf/errors.hpp"
#include "fracgmrf/io.hpp"

namespace fracgmrf {
namespace {

std::array<int, 3> decode(std::size_t flat, std::span<const int> extents) {
  std::array<int, 3> idx{0, 0, 0};
  for (int p = static_cast<int>(extents.size()) - 1; p >= 0; --p) {
    const auto n = static_cast<std::size_t>(extents[static_cast<std::size_t>(p)]);
    idx[static_cast<std::size_t>(p)] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Row blocks whose stacked G realises S_k.
std::vector<Stencil> square_root_blocks(int dim, int k, SymbolMode mode) {
  if (k < 0) throw InvalidArgument("difference order must be non-negative");
  if (k == 0) return {Stencil::identity()};
  std::vector<Stencil> blocks;
  if (mode == SymbolMode::separable) {
    for (int p = 0; p < dim; ++p) blocks.push_back(Stencil::backward_difference(p, k));
    return blocks;
  }
  Stencil power = Stencil::identity();
  const Stencil lap = Stencil::negative_laplacian(dim);
  for (int i = 0; i < k / 2; ++i) power = power.compose(lap);
  if (k % 2 == 0) return {power};
  for (int p = 0; p < dim; ++p) {
    blocks.push_back(Stencil::backward_difference(p, 1).compose(power));
  }
  return blocks;
}

}  // namespace

Boundary Boundary::periodic_extended(int factor) {
  if (factor < 2) throw InvalidArgument("extension factor must be at least 2");
  return {Kind::periodic_extended, factor};
}

LatticeGrid::LatticeGrid(int dim, double h, std::vector<int> extents, Boundary boundary)
    : dim_(dim), h_(h), extents_(std::move(extents)), boundary_(boundary) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (!std::isfinite(h) || !(h > 0.0)) throw InvalidArgument("grid step must be positive");
  if (static_cast<int>(extents_.size()) != dim) {
    throw InvalidArgument("need one extent per axis");
  }
  for (int n : extents_) {
    if (n < 3) throw InvalidArgument("each axis needs at least 3 points");
  }
  if (boundary_.kind == Boundary::Kind::periodic) boundary_.factor = 1;
  if (boundary_.kind == Boundary::Kind::periodic_extended && boundary_.factor < 2) {
    throw InvalidArgument("extension factor must be at least 2");
  }
}

std::size_t LatticeGrid::size() const noexcept {
  std::size_t total = 1;
  for (int n : extents_) total *= static_cast<std::size_t>(n);
  return total;
}

std::vector<int> LatticeGrid::working_extents() const {
  std::vector<int> w(extents_);
  for (int& n : w) n *= boundary_.factor;
  return w;
}

std::size_t LatticeGrid::working_size() const noexcept {
  std::size_t total = 1;
  for (int n : extents_) total *= static_cast<std::size_t>(n * boundary_.factor);
  return total;
}

LatticeGrid LatticeGrid::working_grid() const {
  return LatticeGrid(dim_, h_, working_extents(), Boundary::periodic());
}

std::size_t LatticeGrid::working_index(std::span<const int> multi) const {
  std::size_t flat = 0;
  for (int p = 0; p < dim_; ++p) {
    const int n = extents_[static_cast<std::size_t>(p)] * boundary_.factor;
    int i = multi[static_cast<std::size_t>(p)] % n;
    if (i < 0) i += n;
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<double> LatticeGrid::crop(std::span<const double> working_values) const {
  if (working_values.size() != working_size()) {
    throw InvalidArgument("values do not match the working grid");
  }
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = decode(i, extents_);
    out[i] = working_values[working_index(std::span<const int>(idx.data(), extents_.size()))];
  }
  return out;
}

Stencil Stencil::identity() {
  Stencil s;
  s.coeff[{0, 0, 0}] = 1.0;
  return s;
}

Stencil Stencil::backward_difference(int axis, int k) {
  Stencil s;
  for (int j = 0; j <= k; ++j) {
    Offset o{0, 0, 0};
    o[static_cast<std::size_t>(axis)] = -j;
    s.coeff[o] = (j % 2 ? -1.0 : 1.0) * binomial(k, j);
  }
  return s;
}

Stencil Stencil::negative_laplacian(int dim) {
  Stencil s;
  s.coeff[{0, 0, 0}] = 2.0 * dim;
  for (int p = 0; p < dim; ++p) {
    for (int step : {-1, 1}) {
      Offset o{0, 0, 0};
      o[static_cast<std::size_t>(p)] = step;
      s.coeff[o] = -1.0;
    }
  }
  return s;
}

Stencil Stencil::compose(const Stencil& other) const {
  Stencil out;
  for (const auto& [oa, ca] : coeff) {
    for (const auto& [ob, cb] : other.coeff) {
      out.coeff[{oa[0] + ob[0], oa[1] + ob[1], oa[2] + ob[2]}] += ca * cb;
    }
  }
  return out;
}

SparseFactorTerm difference_operator(const LatticeGrid& grid, int k, SymbolMode mode) {
  const auto blocks = square_root_blocks(grid.dim(), k, mode);
  const auto extents = grid.working_extents();
  const std::size_t points = grid.working_size();

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < points; ++i) {
      const auto base = decode(i, extents);
      for (const auto& [offset, value] : blocks[b].coeff) {
        std::array<int, 3> target{base[0] + offset[0], base[1] + offset[1], base[2] + offset[2]};
        const auto col = grid.working_index(
            std::span<const int>(target.data(), static_cast<std::size_t>(grid.dim())));
        triplets.emplace_back(static_cast<int>(b * points + i), static_cast<int>(col), value);
      }
    }
  }
  SparseFactorTerm term;
  term.k = k;
  term.G.resize(static_cast<Eigen::Index>(blocks.size() * points),
                static_cast<Eigen::Index>(points));
  term.G.setFromTriplets(triplets.begin(), triplets.end());
  term.G.prune(0.0);
  term.G.makeCompressed();
  return term;
}

std::vector<double> term_symbol(const LatticeGrid& grid, int k, SymbolMode mode) {
  const auto extents = grid.working_extents();
  std::vector<double> out(grid.working_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = decode(i, extents);
    double sum_s = 0.0;
    double sum_pow = 0.0;
    for (int p = 0; p < grid.dim(); ++p) {
      const double half = std::numbers::pi * idx[static_cast<std::size_t>(p)] / extents[static_cast<std::size_t>(p)];
      const double s = 4.0 * std::sin(half) * std::sin(half);
      sum_s += s;
      sum_pow += std::pow(s, k);
    }
    if (k == 0) {
      out[i] = 1.0;
    } else {
      out[i] = mode == SymbolMode::separable ? sum_pow : std::pow(sum_s, k);
    }
  }
  return out;
}

PrecisionAssembly assemble_precision(const TaylorSpectrum& spectrum, const LatticeGrid& grid,
                                     SymbolMode mode) {
  const auto& params = spectrum.params();
  if (params.dim() != grid.dim()) throw InvalidArgument("grid and model dimensions differ");
  const double h = grid.step();
  const auto n = static_cast<Eigen::Index>(grid.working_size());

  PrecisionAssembly assembly{grid, mode, {}, 1.0 / params.sigma2(), SparseMatrix(n, n)};
  const auto c = spectrum.c();
  for (int k = 0; k <= spectrum.order(); ++k) {
    const double ck = c[static_cast<std::size_t>(k)];
    if (ck == 0.0) continue;
    auto term = difference_operator(grid, k, mode);
    term.weight = std::fabs(ck) * std::pow(h, params.dim() - 2.0 * k);
    term.sign = ck > 0.0 ? 1 : -1;
    const SparseMatrix gram = SparseMatrix(term.G.transpose()) * term.G;
    assembly.Q += (term.sign * term.weight * assembly.precision_scale) * gram;
    assembly.terms.push_back(std::move(term));
  }
  assembly.Q.makeCompressed();
  return assembly;
}

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

}  // namespace fracgmrf
