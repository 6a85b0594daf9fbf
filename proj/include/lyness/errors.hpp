#pragma once

#include <stdexcept>
#include <string>

namespace lyness {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed numeric text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a formula: non-positive coordinate, pole,
/// division by zero, parameter out of range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Valid input for which the requested object is not defined, e.g. W for
/// even dimension or the Lie symmetry for k < 3.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A search (root bracketing, level solve) found nothing.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not continue.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace lyness
