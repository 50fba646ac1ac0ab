#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbqa {

/// Invalid arguments or inconsistent inputs passed to a library call.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed instance/config file. Carries the 1-based line number (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite dynamical state during integration.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Optimality gap requested against a zero reference energy.
class UndefinedGapError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Too few finite points for a power-law fit.
class InsufficientDataError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sbqa
