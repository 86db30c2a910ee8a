#pragma once

#include <cstdint>
#include <optional>

#include "vne/instance.hpp"

namespace vne {

struct OracleResult {
  bool feasible = false;
  std::int64_t value = 0;
  Mapping mapping;
};

/// Exhaustive exact solve for tiny instances: enumerates every injective
/// capacity-respecting placement and, per placement, all loop-free routing
/// combinations on residual capacities, pruned by a capacity-blind
/// shortest-path bound against the incumbent. Ground truth for the property
/// suites. Guarded to n_r <= 6 and n_s <= 12 (throws TooLarge beyond).
OracleResult brute_force_optimum(const Instance& inst);

}  // namespace vne
