#pragma once

#include <stdexcept>
#include <string>

namespace sumsq {

/// Input outside the mathematical domain of an operation (zero where a
/// positive integer is required, a composite where a prime is required...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An intermediate value would leave the signed 64-bit range, or an input
/// exceeds the 2^62 width bound.
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// An exhaustive search hit its configured node or state limit. Never
/// swallowed: a truncated search has no valid answer.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sumsq
