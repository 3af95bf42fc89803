#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fracgmrf/sample.hpp"
#include "fracgmrf/spectrum.hpp"

namespace fracgmrf {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// "# key=value" lines describing the resolved configuration.
void write_config_header(std::ostream& out, const ConfigEntries& config);

nlohmann::ordered_json to_json(const TaylorSpectrum& spectrum);

/// Long-format CSV: realization, one column per axis index, value.
void write_realizations_csv(std::ostream& out, const std::vector<FieldRealization>& fields);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace fracgmrf
