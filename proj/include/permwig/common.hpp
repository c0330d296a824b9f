#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace permwig {

using Complex = std::complex<double>;

/// Thrown when an operation would exceed a configured combinatorial or
/// storage budget (map counts, moment order, table sizes, ...).
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a configuration file or recipe fails to parse or validate.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace permwig
