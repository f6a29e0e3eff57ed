#pragma once

#include <stdexcept>
#include <string>

namespace ising_ais {

/// Malformed graph, spin vector, or boundary data.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lattice construction failed (e.g. no room for interior points).
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact enumeration refused because the state space is too large.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Diagnostics requested on inputs that cannot support them.
class DiagnosticsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ising_ais
