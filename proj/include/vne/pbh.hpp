#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vne/colgen.hpp"
#include "vne/instance.hpp"
#include "vne/partition.hpp"
#include "vne/rng.hpp"

namespace vne {

enum class PbhPricer { Greedy, Exact };

struct PbhConfig {
  int k_r = 0;             // 0 -> floor(n_r / 10), clamped to >= 1
  int column_target = 200;
  PbhPricer pricer = PbhPricer::Greedy;
  double rmp_time_limit = 600.0;  // integer master wall-clock budget
  std::uint64_t seed = 0;
  int greedy_restarts = 100;
  double pricer_time_limit = 30.0;
  /// Adjust boundary placement costs by shortest-path estimates toward the
  /// tentative placements of cut-edge neighbors.
  bool boundary_aware = true;
  /// Average capacitated substrate part size relative to the largest virtual
  /// part when deriving the strict substrate partition.
  double substrate_ratio = 1.5;
  int max_batch_retries = 10;
  std::optional<Partition> virtual_partition;
  std::optional<Partition> substrate_partition;
};

struct PbhReport {
  mip::Status status = mip::Status::NoSolutionFound;
  std::int64_t cost = 0;
  int columns = 0;
  int k_r = 0;
  int k_s = 0;
  double master_bound = -mip::kInf;
  long master_nodes = 0;
  double wall_seconds = 0.0;
};

struct PbhResult {
  std::optional<Mapping> mapping;
  PbhReport report;
};

struct PbhBatch {
  /// One entry per virtual part; empty optional = the sub-pricer failed.
  std::vector<std::optional<Column>> columns;
  std::vector<int> assignment;  // virtual part -> substrate part index
};

/// One boundary-aware batch: virtual parts are randomly assigned to distinct
/// substrate parts, tentative placements start at each part's closeness
/// center, and every part is priced with placement costs adjusted by the
/// shortest-path distance to the tentative placements of its cut-edge
/// neighbors, updating the tentative placements as it goes.
/// Throws PartCountMismatch when there are fewer substrate parts than
/// virtual parts.
PbhBatch generate_integer_columns(const Instance& inst, const PartitionContext& ctx,
                                  const std::vector<SubgraphView>& substrate_parts,
                                  const DualVector& duals, PbhPricer pricer,
                                  const std::vector<std::vector<Weight>>& substrate_distances,
                                  Rng& rng, const PbhConfig& config);

/// Assembles a full mapping from one chosen column per part plus explicit
/// cut-edge routes. Returns nothing when the routes are missing/invalid.
std::optional<Mapping> assemble_mapping(const Instance& inst, const PartitionContext& ctx,
                                        const std::vector<const Column*>& chosen,
                                        const std::vector<std::vector<OrientedEdgeRef>>& cut_routes);

/// The full heuristic: partition both networks, accumulate integer-friendly
/// columns batch by batch (duals refreshed from the growing master), then
/// solve the integer restricted master and assemble the selected columns
/// into a mapping.
PbhResult solve_pbh(const Instance& inst, const PbhConfig& config);

}  // namespace vne
