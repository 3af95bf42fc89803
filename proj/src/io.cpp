#include "fracgmrf/io.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace fracgmrf {

void write_config_header(std::ostream& out, const ConfigEntries& config) {
  for (const auto& [key, value] : config) out << "# " << key << '=' << value << '\n';
}

nlohmann::ordered_json to_json(const TaylorSpectrum& spectrum) {
  const auto& p = spectrum.params();
  nlohmann::ordered_json j;
  j["alpha"] = p.alpha();
  j["kappa"] = p.kappa();
  j["sigma2"] = p.sigma2();
  j["d"] = p.dim();
  j["K"] = spectrum.order();
  j["a"] = std::vector<double>(spectrum.a().begin(), spectrum.a().end());
  j["c"] = std::vector<double>(spectrum.c().begin(), spectrum.c().end());
  nlohmann::ordered_json pos;
  pos["kind"] = to_string(spectrum.positivity().kind);
  if (spectrum.positivity().kind == Positivity::positive_on_ball) {
    pos["radius"] = spectrum.positivity().radius;
  }
  pos["grid_min"] = spectrum.positivity().grid_min;
  j["positivity"] = pos;
  return j;
}

void write_realizations_csv(std::ostream& out, const std::vector<FieldRealization>& fields) {
  if (fields.empty()) return;
  const auto& extents = fields.front().grid.extents();
  out << "realization";
  for (std::size_t p = 0; p < extents.size(); ++p) out << ",i" << p;
  out << ",value\n";
  std::vector<int> idx(extents.size());
  for (const auto& f : fields) {
    std::fill(idx.begin(), idx.end(), 0);
    for (double v : f.values) {
      out << f.index;
      for (int i : idx) out << ',' << i;
      out << ',' << format_double(v) << '\n';
      for (int p = static_cast<int>(idx.size()) - 1; p >= 0; --p) {
        if (++idx[static_cast<std::size_t>(p)] < extents[static_cast<std::size_t>(p)]) break;
        idx[static_cast<std::size_t>(p)] = 0;
      }
    }
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace fracgmrf
