#ifndef PHARM_ERROR_HPP_
#define PHARM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pharm {

// Raised when an input violates a documented precondition (parameter caps,
// exponent range, vertex budget, malformed manifests, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a requested ball would exceed the configured vertex budget.
class BudgetExceeded : public ValidationError {
 public:
  BudgetExceeded(const std::string& what, std::size_t projected)
      : ValidationError(what), projected_(projected) {}
  std::size_t projected() const noexcept { return projected_; }

 private:
  std::size_t projected_;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pharm

#endif  // PHARM_ERROR_HPP_
