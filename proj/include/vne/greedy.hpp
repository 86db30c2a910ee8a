#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vne/instance.hpp"
#include "vne/partition.hpp"

namespace vne {

/// Remaining substrate capacities while a mapping is under construction.
struct ResidualState {
  std::vector<std::int64_t> node_remaining;
  std::vector<std::int64_t> edge_remaining;

  static ResidualState from(const Instance& inst) {
    return {inst.node_capacity, inst.edge_capacity};
  }
};

struct GreedyOptions {
  /// Additive placement-score adjustment per (virtual node, substrate node);
  /// used by the pricers to steer placement by reduced costs. Routing is
  /// unaffected.
  const std::vector<std::vector<double>>* placement_score = nullptr;
  /// Restrict placements and routing to a substrate subgraph.
  const SubgraphView* view = nullptr;
};

/// Randomized greedy embedding: a random seed node lands on a random feasible
/// substrate node, then unplaced virtual nodes with a placed neighbor follow,
/// each on the unused substrate node minimizing the cost-weighted distance
/// sum to its placed neighbors. Edges are then routed one at a time by
/// cheapest feasible path on residual capacities (decreasing demand, ties by
/// edge id). Returns nothing when a step has no candidate or no path.
std::optional<Mapping> greedy_embed(const Instance& inst, std::uint64_t seed,
                                    const GreedyOptions& options = {});

using MappingScorer = std::function<double(const Mapping&)>;

/// Best of `restarts` independent greedy trajectories under the given score
/// (default: mapping cost). Deterministic: trajectory t runs on a seed
/// derived from (seed, t) and ties fall to the earliest trajectory.
std::optional<Mapping> greedy_multi(const Instance& inst, int restarts,
                                    std::uint64_t seed,
                                    const MappingScorer& score = {},
                                    const GreedyOptions& options = {});

/// Cheapest residual-feasible path between two substrate nodes, or nullopt.
/// Edge weights are the per-unit edge costs; saturated edges are skipped.
std::optional<std::vector<OrientedEdgeRef>> route_cheapest_residual(
    const Instance& inst, const ResidualState& residual, NodeId from, NodeId to,
    std::int64_t demand, const SubgraphView* view = nullptr);

}  // namespace vne
