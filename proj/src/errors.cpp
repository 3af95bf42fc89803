#include "fracgmrf/errors.hpp"

#include <sstream>

namespace fracgmrf {
namespace {

std::string describe_symbol(const std::vector<double>& xi, double value) {
  std::ostringstream os;
  os << "non-positive spectral denominator " << value << " at xi = (";
  for (std::size_t i = 0; i < xi.size(); ++i) os << (i ? ", " : "") << xi[i];
  os << ")";
  return os.str();
}

std::string describe_breakdown(int term_order, std::size_t term_row, std::size_t pivot,
                               double before, double after) {
  std::ostringstream os;
  os << "downdate breakdown: term k=" << term_order << " row " << term_row
     << " drives pivot " << pivot << " from " << before << " to squared value " << after;
  return os.str();
}

}  // namespace

NonPositiveSymbol::NonPositiveSymbol(std::vector<double> frequency, double value)
    : NumericalError(describe_symbol(frequency, value)),
      frequency_(std::move(frequency)),
      value_(value) {}

FactorBreakdown::FactorBreakdown(int term_order, std::size_t term_row, std::size_t pivot,
                                 double pivot_before, double pivot_squared_after)
    : NumericalError(
          describe_breakdown(term_order, term_row, pivot, pivot_before, pivot_squared_after)),
      term_order_(term_order),
      term_row_(term_row),
      pivot_(pivot) {}

}  // namespace fracgmrf
