#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vne/graph.hpp"

namespace vne {

/// A labeled split of a graph's nodes into k nonempty parts, each inducing a
/// connected subgraph.
struct Partition {
  std::vector<int> part_of;  // per node, part index in 0..k-1
  int k = 0;

  std::vector<std::vector<NodeId>> members() const;
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// A node subset of a parent graph together with its induced edges and the
/// members touching at least one cut edge.
struct SubgraphView {
  std::vector<NodeId> members;
  std::vector<EdgeId> induced_edges;
  std::vector<NodeId> boundary_nodes;
};

/// Checks cover/nonempty/connected invariants; throws on violation.
void check_partition(const Graph& g, const Partition& p);

/// Balanced connected k-way partition by seeded multi-start region growing
/// plus boundary refinement. Moves are only accepted when they keep every
/// part connected and within the soft balance bound (2 * ceil(weight/k)).
/// Optional node weights steer the balance measure (default: unit weights);
/// zero-weight nodes still need a home but do not count toward part sizes.
/// Deterministic per seed. Throws InfeasibleK when k < 1 or k > |V|.
Partition partition_balanced_connected(const Graph& g, int k, std::uint64_t seed,
                                       std::span<const std::int64_t> node_weights = {});

/// Edges whose endpoints lie in different parts, ascending by edge id.
std::vector<EdgeId> cut_edges(const Graph& g, const Partition& p);

/// The view induced by one part, with boundary nodes filled in.
SubgraphView part_view(const Graph& g, const Partition& p, int part);

/// Grows each part by breadth-first neighbor additions until it holds at
/// least target_size nodes (or no frontier remains). Views may overlap.
std::vector<SubgraphView> expand_substrate_parts(const Graph& gs, const Partition& p,
                                                 int target_size);

/// True iff every part of p_fine is contained in one part of p_coarse.
bool is_refinement(const Partition& p_fine, const Partition& p_coarse);

/// Partition files: one `node_id part_index` line per node.
Partition load_partition(const Graph& g, const std::string& path);
void store_partition(const Partition& p, const std::string& path);

}  // namespace vne
