#pragma once

#include <stdexcept>
#include <string>

namespace dealer {

/// Raised when a caller violates an operation's preconditions or passes an
/// invalid parameter set.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input file cannot be read or parsed.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dealer
