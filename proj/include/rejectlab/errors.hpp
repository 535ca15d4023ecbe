#pragma once

#include <stdexcept>
#include <string>

namespace rejectlab {

// Bad inputs: malformed distributions, size mismatches, out-of-range parameters.
// The CLI maps this to exit code 2.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact combinatorial computation would exceed its work budget.
// The CLI maps this to exit code 3.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw validation_error(msg);
}

}  // namespace rejectlab
