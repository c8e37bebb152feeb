#ifndef SMOOTHMIX_COMMON_HPP
#define SMOOTHMIX_COMMON_HPP

#include <stdexcept>
#include <string>

namespace smoothmix {

// Argument / dimension errors on public entry points.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A precondition stated by a function's contract was violated
// (e.g. operating on an unnormalized root mixture).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Numerical failure: non-finite intermediate values, non-convergent
// quadrature refinement, failed factorizations on valid-looking input.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ArgumentError(msg);
}

}  // namespace smoothmix

#endif
