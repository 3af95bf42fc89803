#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracgmrf {

/// Rejected parameters or malformed input. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The discrete (or continuous) spectral denominator is not strictly positive.
class NonPositiveSymbol : public NumericalError {
 public:
  NonPositiveSymbol(std::vector<double> frequency, double value);

  const std::vector<double>& frequency() const noexcept { return frequency_; }
  double value() const noexcept { return value_; }

 private:
  std::vector<double> frequency_;
  double value_;
};

/// A Cholesky downdate would drive a pivot to zero or below.
class FactorBreakdown : public NumericalError {
 public:
  FactorBreakdown(int term_order, std::size_t term_row, std::size_t pivot,
                  double pivot_before, double pivot_squared_after);

  int term_order() const noexcept { return term_order_; }
  std::size_t term_row() const noexcept { return term_row_; }
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  int term_order_;
  std::size_t term_row_;
  std::size_t pivot_;
};

}  // namespace fracgmrf
