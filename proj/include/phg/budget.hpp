#pragma once

#include <cstdint>
#include <stdexcept>

namespace phg {

/// Thrown when an allocation would exceed the configured memory budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Memory cap in bytes; PHG_BUDGET_BYTES overrides the 1 GiB default.
std::uint64_t budget_bytes();

/// Throws BudgetError before any allocation takes place.
void ensure_budget(std::uint64_t bytes);

}  // namespace phg
