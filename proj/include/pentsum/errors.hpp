#pragma once

#include <stdexcept>
#include <string>

namespace pentsum {

/// Arithmetic left the validated 64-bit range.
struct RangeError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// A documented precondition was violated by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Lookup of a tuple, certificate or condition id failed.
struct NotFound : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Allocation or budget limits were exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The mathematics guarantees an object that the implementation failed to
/// produce; always an implementation or data bug.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pentsum
