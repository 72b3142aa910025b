#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace winprob {

/// Base class for every data-dependent failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 means "not line oriented".
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parsed data that violates a domain invariant (bad lead step, tie, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical fitting failed (nonconvergence, separation).
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace winprob
