#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcdsum {

// Input violates an operation's precondition (N < 21, non-square-free set, i >= j, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A value does not fit: prime index beyond the supported table, integer overflow, size refusal.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised when a completeness step finds a state that valid input cannot produce.
class ContradictionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double residual,
                   std::size_t iterations, std::vector<double> last_iterate)
      : std::runtime_error(what),
        last_estimate_(last_estimate),
        residual_(residual),
        iterations_(iterations),
        last_iterate_(std::move(last_iterate)) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  double last_estimate_;
  double residual_;
  std::size_t iterations_;
  std::vector<double> last_iterate_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gcdsum
