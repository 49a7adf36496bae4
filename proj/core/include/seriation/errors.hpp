#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace seriation {

// Raised when the subsample loop cannot collect enough recognizable
// samples within its attempt budget; usually means alpha is infeasible.
struct BudgetExhausted : std::runtime_error {
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  std::int64_t required = 0;
  BudgetExhausted(std::int64_t att, std::int64_t suc, std::int64_t req)
      : std::runtime_error("subsample budget exhausted: " +
                           std::to_string(suc) + "/" + std::to_string(req) +
                           " successes in " + std::to_string(att) +
                           " attempts"),
        attempts(att), successes(suc), required(req) {}
};

// File/format problems distinct from argument validation.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seriation
