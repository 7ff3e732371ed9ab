#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace empgram {

/// Invalid dimensions, flags or option combinations supplied by the caller.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A simulated state or derivative became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time, std::size_t step, std::vector<double> state)
      : std::runtime_error(what), time_(time), step_(step), state_(std::move(state)) {}

  double time() const noexcept { return time_; }
  std::size_t step() const noexcept { return step_; }
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  double time_;
  std::size_t step_;
  std::vector<double> state_;
};

}  // namespace empgram
