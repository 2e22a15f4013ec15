#pragma once

#include <stdexcept>
#include <string>

namespace stc {

/// Bad user input: a missing path, an out-of-range parameter, a malformed
/// spec or profile file. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a library call was not met by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A result failed one of its own consistency checks (confusion totals,
/// threshold monotonicity). The CLI maps this to exit code 3.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stc
