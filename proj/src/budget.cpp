#include "phg/budget.hpp"

#include <cstdlib>
#include <string>

namespace phg {

std::uint64_t budget_bytes() {
  static const std::uint64_t value = [] {
    if (const char* env = std::getenv("PHG_BUDGET_BYTES")) {
      try {
        const unsigned long long v = std::stoull(env);
        if (v > 0) return static_cast<std::uint64_t>(v);
      } catch (const std::exception&) {
        // fall through to default on malformed input
      }
    }
    return std::uint64_t{1} << 30;
  }();
  return value;
}

void ensure_budget(std::uint64_t bytes) {
  if (bytes > budget_bytes())
    throw BudgetError("memory budget exceeded: need " + std::to_string(bytes) +
                      " bytes, budget is " + std::to_string(budget_bytes()) +
                      " (set PHG_BUDGET_BYTES to raise)");
}

}  // namespace phg
