#pragma once

#include <stdexcept>
#include <string>

namespace pcw {

// Base of every exception thrown by the core. Verdicts (invalid proof lines,
// failed separations) are reported as values, not exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based, 0 when not attributable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A desk-scale enumeration limit would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Inputs are well formed but violate an operation's precondition
// (e.g. a satisfiable formula handed to a refutation producer).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcw
