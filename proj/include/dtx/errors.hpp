#pragma once

#include <stdexcept>
#include <string>

namespace dtx {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Function is not a bijection onto its codomain (flat piece, jump, or gap).
class NotInvertibleError : public Error {
 public:
  using Error::Error;
};

/// Malformed distribution specification (weights, supports).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Quantile or risk level outside its admissible range.
class LevelError : public Error {
 public:
  using Error::Error;
};

/// Function does not belong to the class an operation requires.
class ClassError : public Error {
 public:
  using Error::Error;
};

/// Transform word does not meet the admissibility conditions for collapsing.
class NormalFormError : public Error {
 public:
  using Error::Error;
};

/// Black-box probing produced something that is not a valid sample.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace dtx
