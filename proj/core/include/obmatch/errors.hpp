#pragma once

#include <stdexcept>
#include <string>

namespace obmatch {

/// Caller handed in an argument outside its documented range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Serialized input could not be decoded or failed instance validation.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exhaustive computation was refused because its input exceeds the
/// documented size guard.
struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A measure-zero collision in sampled inputs; the caller should redraw.
struct ResampleRequired : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The competitive ratio has no value because the optimum is zero.
struct UndefinedRatioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Signals a bug in the mechanism
/// rules (e.g. a non-monotone win region), never bad user input.
struct InternalInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace obmatch
