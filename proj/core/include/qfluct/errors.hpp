#pragma once

#include <stdexcept>

namespace qfluct {

/// The dissipation channel has no unique fixed point (for example p_a = 0).
class DegenerateChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument sits on the boundary where the requested quantity diverges.
class OutOfRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monte-Carlo statistics lack one of the two initial-state columns.
class IncompleteEnsembleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical invariant was breached at run time.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario configuration failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfluct
