#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracgmrf/covariance.hpp"
#include "fracgmrf/errors.hpp"
#include "fracgmrf/experiments.hpp"
#include "fracgmrf/factor.hpp"
#include "fracgmrf/io.hpp"
#include "fracgmrf/lattice.hpp"
#include "fracgmrf/sample.hpp"

using namespace fracgmrf;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

// Working-grid size above which `sample --method auto` switches to the
// circulant sampler.
constexpr std::size_t kCholeskyLimit = 4096;

struct Options {
  std::optional<double> alpha;
  double kappa = 1.0;
  double sigma2 = 1.0;
  std::optional<int> dim;
  std::optional<int> order;
  std::optional<int> J;
  double h = 0.1;
  std::vector<int> extents;
  int boundary_factor = 1;
  std::string mode;
  double rel_tol = 1e-10;
  double audit_radius = 100.0;
  int audit_points = 10000;
  std::string output;

  // covariance
  std::vector<std::string> kinds{"exact"};
  std::vector<double> lags;
  double lag_max = 10.0;
  double lag_step = 0.5;
  int frequency_points = 0;
  double ball_radius = 0.0;

  // assemble / factor
  bool stats_only = false;
  bool unit_diagonal = false;
  std::string update_order = "positives_first";

  // sample
  std::uint64_t seed = 1;
  int count = 1;
  std::string method = "auto";

  // convergence
  std::vector<double> steps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> conv_lags{0.0, 1.0};
  bool interpolated = false;

  // error-vs-order
  double side = 20.0;
  int k_min = 1;
  int k_max = 8;
  std::vector<std::string> modes{"laplacian_power", "separable"};
  bool sensitivity = false;
};

struct Resolved {
  MaternParams params;
  int K;
  SymbolMode mode;
  QuadratureSettings quad;
  AuditGrid audit;
};

Resolved resolve(const Options& o, double default_alpha, int default_dim) {
  const int dim = o.dim.value_or(default_dim);
  MaternParams params(o.alpha.value_or(default_alpha), o.kappa, o.sigma2, dim);
  if (o.order && o.J) throw InvalidArgument("give either --order or --J, not both");
  if (o.order && *o.order < 0) throw InvalidArgument("--order must be non-negative");
  const int K = o.order ? *o.order : select_order(params, o.J.value_or(1));
  QuadratureSettings quad;
  quad.rel_tol = o.rel_tol;
  AuditGrid audit{o.audit_radius, o.audit_points};
  const SymbolMode mode = o.mode.empty() ? default_symbol_mode(dim) : parse_symbol_mode(o.mode);
  return {params, K, mode, quad, audit};
}

ConfigEntries base_config(const Resolved& r) {
  return {{"alpha", format_double(r.params.alpha())},
          {"kappa", format_double(r.params.kappa())},
          {"sigma2", format_double(r.params.sigma2())},
          {"d", std::to_string(r.params.dim())},
          {"K", std::to_string(r.K)},
          {"symbol_mode", to_string(r.mode)},
          {"rel_tol", format_double(r.quad.rel_tol)}};
}

LatticeGrid make_grid(const Options& o, int dim) {
  std::vector<int> extents = o.extents;
  if (extents.empty()) extents.push_back(static_cast<int>(std::llround(20.0 / o.h)) + 1);
  if (extents.size() == 1) extents.assign(static_cast<std::size_t>(dim), extents.front());
  const Boundary b =
      o.boundary_factor > 1 ? Boundary::periodic_extended(o.boundary_factor) : Boundary::periodic();
  return LatticeGrid(dim, o.h, extents, b);
}

void add_grid_config(ConfigEntries& cfg, const LatticeGrid& grid) {
  cfg.emplace_back("h", format_double(grid.step()));
  std::string n;
  for (int e : grid.extents()) n += (n.empty() ? "" : "x") + std::to_string(e);
  cfg.emplace_back("n", n);
  cfg.emplace_back("boundary", grid.boundary().kind == Boundary::Kind::periodic
                                   ? "periodic"
                                   : "periodic_extended(" +
                                         std::to_string(grid.boundary().factor) + ")");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int run_coeffs(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  const TaylorSpectrum spectrum(r.params, r.K, r.audit);
  nlohmann::ordered_json out;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : base_config(r)) cfg[k] = v;
  cfg["audit_radius_factor"] = r.audit.radius_factor;
  cfg["audit_points"] = r.audit.points;
  out["config"] = cfg;
  const auto body = to_json(spectrum);
  for (const auto& [k, v] : body.items()) out[k] = v;
  if (o.J) {
    const auto cert = lemma_decomposition(r.params, *o.J, r.audit);
    nlohmann::ordered_json c;
    c["J"] = cert.J;
    c["K"] = cert.K;
    c["q"] = nlohmann::ordered_json::array();
    for (const auto& q : cert.q) c["q"].push_back(q.coeffs);
    c["remainder_coeff"] = cert.remainder_coeff;
    c["grid_min"] = cert.grid_min;
    c["c_lower"] = cert.c_lower;
    c["bound_holds_at_infinity"] = cert.bound_holds_at_infinity;
    out["certificate"] = c;
  }
  Output sink(o.output);
  sink.stream() << out.dump(2) << '\n';
  return 0;
}

int run_covariance(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  std::vector<CovarianceKind> kinds;
  for (const auto& k : o.kinds) kinds.push_back(parse_covariance_kind(k));
  std::vector<double> lags = o.lags;
  if (lags.empty()) {
    if (!(o.lag_step > 0.0) || !(o.lag_max >= 0.0)) {
      throw InvalidArgument("--lag-step must be positive and --lag-max non-negative");
    }
    const auto steps = static_cast<long long>(std::floor(o.lag_max / o.lag_step + 1e-9));
    for (long long i = 0; i <= steps; ++i) lags.push_back(static_cast<double>(i) * o.lag_step);
  }

  std::optional<TaylorSpectrum> spectrum;
  for (auto k : kinds) {
    if (k != CovarianceKind::exact && k != CovarianceKind::band_limited) {
      spectrum.emplace(r.params, r.K, r.audit);
      break;
    }
  }

  auto evaluate = [&](CovarianceKind kind, double x) {
    std::vector<double> lag(static_cast<std::size_t>(r.params.dim()), 0.0);
    lag[0] = x;
    if (kind == CovarianceKind::taylor && o.ball_radius > 0.0) {
      return taylor_covariance_on_ball(*spectrum, lag, o.ball_radius, r.quad);
    }
    CovarianceQuery q{kind, lag, spectrum, o.h, r.mode, o.frequency_points};
    return evaluate_covariance(r.params, q, r.quad);
  };

  Output sink(o.output);
  auto& out = sink.stream();
  if (o.lags.size() == 1 && kinds.size() == 1) {
    out << format_double(evaluate(kinds.front(), lags.front())) << '\n';
    return 0;
  }
  auto cfg = base_config(r);
  cfg.emplace_back("h", format_double(o.h));
  if (o.ball_radius > 0.0) cfg.emplace_back("ball_radius", format_double(o.ball_radius));
  write_config_header(out, cfg);
  out << "lag,value,kind\n";
  for (auto kind : kinds) {
    for (double x : lags) {
      out << format_double(x) << ',' << format_double(evaluate(kind, x)) << ',' << to_string(kind)
          << '\n';
    }
  }
  return 0;
}

UpdateOrder parse_update_order(const std::string& s) {
  if (s == "positives_first") return UpdateOrder::positives_first;
  if (s == "interleaved") return UpdateOrder::interleaved;
  throw InvalidArgument("unknown update order '" + s + "'");
}

int run_assemble(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  const auto grid = make_grid(o, r.params.dim());
  const TaylorSpectrum spectrum(r.params, r.K, r.audit);
  const auto assembly = assemble_precision(spectrum, grid, r.mode);
  Output sink(o.output);
  auto& out = sink.stream();
  auto cfg = base_config(r);
  add_grid_config(cfg, grid);
  cfg.emplace_back("rows", std::to_string(assembly.Q.rows()));
  cfg.emplace_back("nonzeros", std::to_string(assembly.Q.nonZeros()));
  write_config_header(out, cfg);
  if (o.stats_only) {
    out << "term,k,sign,weight,rows\n";
    for (std::size_t i = 0; i < assembly.terms.size(); ++i) {
      const auto& t = assembly.terms[i];
      out << i << ',' << t.k << ',' << (t.sign > 0 ? '+' : '-') << ',' << format_double(t.weight)
          << ',' << t.G.rows() << '\n';
    }
    return 0;
  }
  write_coordinate(out, assembly.Q);
  return 0;
}

int run_factor(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  const auto grid = make_grid(o, r.params.dim());
  const TaylorSpectrum spectrum(r.params, r.K, r.audit);
  const auto assembly = assemble_precision(spectrum, grid, r.mode);
  auto factor = factor_by_updates(assembly, parse_update_order(o.update_order));
  if (o.unit_diagonal) factor = to_unit_diagonal(factor);

  Output sink(o.output);
  auto& out = sink.stream();
  auto cfg = base_config(r);
  add_grid_config(cfg, grid);
  cfg.emplace_back("update_order", o.update_order);
  cfg.emplace_back("form", o.unit_diagonal ? "unit_diagonal" : "plain");
  const auto& s = factor.stats();
  cfg.emplace_back("nonzeros", std::to_string(s.nonzeros));
  cfg.emplace_back("min_diagonal", format_double(s.min_diagonal));
  cfg.emplace_back("max_diagonal", format_double(s.max_diagonal));
  cfg.emplace_back("updates", std::to_string(s.updates));
  cfg.emplace_back("downdates", std::to_string(s.downdates));
  write_config_header(out, cfg);
  if (o.stats_only) return 0;
  write_coordinate(out, factor.upper());
  if (o.unit_diagonal) {
    out << "# d\n";
    for (std::size_t i = 0; i < factor.d().size(); ++i) {
      out << i << ' ' << format_double(factor.d()[i]) << '\n';
    }
  }
  return 0;
}

int run_sample(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  const auto grid = make_grid(o, r.params.dim());
  const TaylorSpectrum spectrum(r.params, r.K, r.audit);
  std::string method = o.method;
  if (method == "auto") method = grid.working_size() <= kCholeskyLimit ? "cholesky" : "spectral";

  std::vector<FieldRealization> fields;
  if (method == "cholesky") {
    const auto assembly = assemble_precision(spectrum, grid, r.mode);
    auto factor = factor_by_updates(assembly, UpdateOrder::positives_first);
    if (o.unit_diagonal) factor = to_unit_diagonal(factor);
    fields = sample_field(factor, grid, o.seed, o.count);
  } else if (method == "spectral") {
    fields = sample_field_spectral(spectrum, grid, r.mode, o.seed, o.count);
  } else {
    throw InvalidArgument("unknown sampling method '" + o.method + "'");
  }

  Output sink(o.output);
  auto& out = sink.stream();
  auto cfg = base_config(r);
  add_grid_config(cfg, grid);
  cfg.emplace_back("seed", std::to_string(o.seed));
  cfg.emplace_back("count", std::to_string(o.count));
  cfg.emplace_back("method", method);
  if (method == "cholesky") cfg.emplace_back("form", o.unit_diagonal ? "unit_diagonal" : "plain");
  write_config_header(out, cfg);
  write_realizations_csv(out, fields);
  return 0;
}

int run_convergence(const Options& o) {
  const auto r = resolve(o, 1.5, 1);
  const TaylorSpectrum spectrum(r.params, r.K, r.audit);
  const auto rows =
      convergence_study(spectrum, o.steps, o.conv_lags, r.mode, o.interpolated, r.quad);
  Output sink(o.output);
  auto& out = sink.stream();
  auto cfg = base_config(r);
  cfg.emplace_back("lattice_values", o.interpolated ? "interpolated" : "discrete_or_interpolated");
  write_config_header(out, cfg);
  out << "h,lag,discrete_value,continuous_value,abs_error\n";
  for (const auto& row : rows) {
    out << format_double(row.h) << ',' << format_double(row.lag) << ','
        << format_double(row.discrete_value) << ',' << format_double(row.continuous_value) << ','
        << format_double(row.abs_error) << '\n';
  }
  return 0;
}

int run_error_vs_order(const Options& o) {
  const Resolved r = resolve(o, std::numbers::pi, 2);
  ErrorVsOrderConfig base;
  base.params = r.params;
  base.h = o.h;
  base.side = o.side;
  base.boundary_factor = o.boundary_factor > 1 ? o.boundary_factor : 2;
  base.k_min = o.k_min;
  base.k_max = o.k_max;
  base.modes.clear();
  for (const auto& m : o.modes) base.modes.push_back(parse_symbol_mode(m));

  std::vector<ErrorVsOrderConfig> runs{base};
  if (o.sensitivity) {
    runs.clear();
    for (double side : {20.0, 40.0}) {
      for (int f : {2, 3}) {
        auto c = base;
        c.side = side;
        c.boundary_factor = f;
        runs.push_back(c);
      }
    }
  }

  Output sink(o.output);
  auto& out = sink.stream();
  ConfigEntries cfg{{"alpha", format_double(r.params.alpha())},
                    {"kappa", format_double(r.params.kappa())},
                    {"sigma2", format_double(r.params.sigma2())},
                    {"d", std::to_string(r.params.dim())},
                    {"h", format_double(base.h)},
                    {"k_min", std::to_string(base.k_min)},
                    {"k_max", std::to_string(base.k_max)},
                    {"target", "exact_matern"}};
  if (!o.sensitivity) {
    cfg.emplace_back("side", format_double(base.side));
    cfg.emplace_back("n", std::to_string(std::llround(base.side / base.h) + 1));
    cfg.emplace_back("boundary", "periodic_extended(" + std::to_string(base.boundary_factor) + ")");
  }
  write_config_header(out, cfg);
  std::ostringstream summary;
  out << "side,boundary_factor,mode,K,valid,max_abs_error,note\n";
  for (const auto& c : runs) {
    const auto rows = error_vs_order(c);
    for (const auto& row : rows) {
      out << format_double(c.side) << ',' << c.boundary_factor << ',' << to_string(row.mode) << ','
          << row.K << ',' << (row.valid ? 1 : 0) << ','
          << (row.valid ? format_double(row.max_abs_error) : "") << ',' << row.note << '\n';
    }
    for (auto mode : c.modes) {
      const auto s = summarize_u_shape(rows, mode);
      summary << "# summary side=" << format_double(c.side) << " boundary_factor="
              << c.boundary_factor << " mode=" << to_string(mode)
              << " argmin=" << (s.argmin ? std::to_string(*s.argmin) : "none")
              << " u_shaped=" << (s.u_shaped ? "true" : "false") << '\n';
    }
  }
  out << summary.str();
  return 0;
}

void add_model_options(CLI::App& app, Options& o) {
  app.add_option("--alpha", o.alpha, "Smoothness alpha (> d/2)");
  app.add_option("--kappa", o.kappa, "Inverse correlation scale")->capture_default_str();
  app.add_option("--sigma2", o.sigma2, "Scaling factor")->capture_default_str();
  app.add_option("-d,--dim", o.dim, "Spatial dimension (1-3)");
  app.add_option("-K,--order", o.order, "Taylor truncation order");
  app.add_option("-J,--J", o.J, "Expansion depth; K = floor(alpha) + 2J + 1");
  app.add_option("--h", o.h, "Lattice step")->capture_default_str();
  app.add_option("-n,--extents", o.extents, "Points per axis (one value repeats)");
  app.add_option("--boundary-factor", o.boundary_factor,
                 "1 for periodic, >= 2 for an extended periodic domain")
      ->capture_default_str();
  app.add_option("--mode", o.mode, "separable or laplacian_power");
  app.add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--audit-radius", o.audit_radius, "Audit grid radius in units of kappa")
      ->capture_default_str();
  app.add_option("--audit-points", o.audit_points, "Audit grid points")->capture_default_str();
  app.add_option("-o,--output", o.output, "Output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice approximations of band-limited fractional Matern fields"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  add_model_options(app, o);

  auto* coeffs = app.add_subcommand("coeffs", "Taylor coefficients as JSON");

  auto* cov = app.add_subcommand("covariance", "Covariance curve as CSV");
  cov->add_option("--kind", o.kinds, "exact, band_limited, taylor, discrete, interpolated")
      ->capture_default_str();
  cov->add_option("--lag", o.lags, "Lag values (default: 0 to --lag-max)");
  cov->add_option("--lag-max", o.lag_max)->capture_default_str();
  cov->add_option("--lag-step", o.lag_step)->capture_default_str();
  cov->add_option("--frequency-points", o.frequency_points,
                  "Frequency grid per axis for discrete values (0: default)");
  cov->add_option("--ball-radius", o.ball_radius,
                  "Integrate the taylor kind over |xi| <= radius only");

  auto* assemble = app.add_subcommand("assemble", "Sparse precision matrix (row col value)");
  assemble->add_flag("--stats", o.stats_only, "Print the term table only");

  auto* factor = app.add_subcommand("factor", "Cholesky factor by ordered updates");
  factor->add_flag("--stats", o.stats_only, "Print the statistics header only");
  factor->add_flag("--ldl", o.unit_diagonal, "Unit-diagonal form with separate D");
  factor->add_option("--update-order", o.update_order, "positives_first or interleaved")
      ->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Field realizations as CSV");
  sample->add_option("--seed", o.seed)->capture_default_str();
  sample->add_option("--count", o.count)->capture_default_str();
  sample->add_option("--method", o.method, "auto, cholesky or spectral")->capture_default_str();
  sample->add_flag("--ldl", o.unit_diagonal, "Sample through the unit-diagonal factor");

  auto* conv = app.add_subcommand("convergence", "Lattice vs continuous covariance as h shrinks");
  conv->add_option("--steps", o.steps)->capture_default_str();
  conv->add_option("--lags", o.conv_lags)->capture_default_str();
  conv->add_flag("--interpolated", o.interpolated, "Always use the interpolated covariance");

  auto* evo = app.add_subcommand("error-vs-order", "Max error against the exact covariance per K");
  evo->add_option("--side", o.side, "Physical side of the target grid")->capture_default_str();
  evo->add_option("--k-min", o.k_min)->capture_default_str();
  evo->add_option("--k-max", o.k_max)->capture_default_str();
  evo->add_option("--modes", o.modes)->capture_default_str();
  evo->add_flag("--sensitivity", o.sensitivity, "Scan side {20, 40} x boundary factor {2, 3}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*coeffs) return run_coeffs(o);
    if (*cov) return run_covariance(o);
    if (*assemble) return run_assemble(o);
    if (*factor) return run_factor(o);
    if (*sample) return run_sample(o);
    if (*conv) return run_convergence(o);
    if (*evo) return run_error_vs_order(o);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
