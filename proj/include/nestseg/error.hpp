#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nestseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The requested number of communities cannot satisfy the strict density
/// ordering. `max_feasible_k()` is the largest k that can.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::size_t max_feasible_k)
      : Error(what), max_feasible_k_(max_feasible_k) {}
  std::size_t max_feasible_k() const noexcept { return max_feasible_k_; }

 private:
  std::size_t max_feasible_k_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// An exhaustive oracle was asked to run outside its size budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace nestseg
