#pragma once

#include <stdexcept>
#include <string>

namespace iqplab {

/// Precondition or dimension violation on a library call.
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Work or memory limit exceeded (enumeration bits, statevector qubits, oracle budget).
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Infeasible experiment parameters.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names the violated invariant.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const std::string& what) {
  if (!cond) throw ArgumentError(what);
}
}  // namespace detail

}  // namespace iqplab
