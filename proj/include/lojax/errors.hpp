#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lojax {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression or input file. `position` is a byte offset into the text.
class ParseError : public Error {
public:
  ParseError(std::size_t position, const std::string& msg)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Violated mathematical precondition (nonzero constant term, dimension
/// mismatch, non-constant family where constancy is required, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The critical locus of the germ is positive-dimensional at the origin.
class NotIsolatedError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

/// A basis computation exceeded its degree cap.
class ResourceLimitError : public Error {
public:
  using Error::Error;
};

/// The exact elimination sees critical points away from the origin: the
/// eliminant degree in t differs from the Milnor number at zero.
class GlobalLocalMismatchError : public Error {
public:
  GlobalLocalMismatchError(long eliminant_degree, long mu, const std::string& msg)
      : Error(msg), eliminant_degree(eliminant_degree), mu(mu) {}
  long eliminant_degree;
  long mu;
};

/// A log-log order fit failed the integer guard.
class FitUnstableError : public Error {
public:
  using Error::Error;
};

/// Fewer than the minimum usable radii survived on every sampling ray.
class TooFewSamplesError : public Error {
public:
  using Error::Error;
};

}  // namespace lojax
