#pragma once

#include <stdexcept>
#include <string>

namespace vcomp {

/// A configured work budget (allocation enumeration, OR evaluation, menu product) would be exceeded.
class SizeGuardError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value function, menu or instance violates a structural requirement
/// (normalization, monotonicity, conservativeness, item universe).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A checked internal invariant failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace vcomp
