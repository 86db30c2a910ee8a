#pragma once

#include <optional>
#include <vector>

#include "vne/instance.hpp"
#include "vne/mip.hpp"
#include "vne/partition.hpp"

namespace vne {

/// Replacement objective coefficients for pricing: x_cost[v][u] per placement
/// variable, y_cost[ev][es] per flow variable (both directions share a cost).
struct FFObjectiveOverride {
  std::vector<std::vector<double>> x_cost;
  std::vector<std::vector<double>> y_cost;
};

struct FFOptions {
  bool relaxed = false;
  /// Flow departure rows: valid inequalities tying a placed endpoint to an
  /// incident routed arc, applied at both path ends.
  bool departure_constraints = true;
  const FFObjectiveOverride* objective_override = nullptr;
  /// Restricts placement and routing variables to a substrate subgraph
  /// (sub-pricer mode). Absent variables simply do not exist in the model.
  const SubgraphView* fix_subgraph = nullptr;
};

/// Variable/row handles into the built model. Missing combinations
/// (capacity-eliminated or outside the subgraph) hold -1.
struct FFModelHandles {
  std::vector<std::vector<mip::VarId>> x;  // [virtual node][substrate node]
  // [virtual edge][substrate edge][direction]; direction 0 follows the
  // substrate edge's canonical orientation.
  std::vector<std::vector<std::array<mip::VarId, 2>>> y;
  std::vector<mip::RowId> placement_rows;            // one per virtual node
  std::vector<std::vector<mip::RowId>> flow_rows;    // [virtual edge][node]
  std::vector<mip::RowId> one_to_one_rows;           // per substrate node
  std::vector<mip::RowId> node_capacity_rows;
  std::vector<mip::RowId> edge_capacity_rows;
  std::vector<std::vector<mip::RowId>> depart_source_rows;  // [ev][node]
  std::vector<std::vector<mip::RowId>> depart_target_rows;
  int x_count = 0;
  int y_count = 0;
};

struct FFModel {
  mip::Model model;
  FFModelHandles handles;
};

/// Builds the bidirected-flow embedding model: placement assignment, per-edge
/// flow conservation, one-to-one placement, node/edge capacities, and the
/// departure inequalities. Placement variables are eliminated on substrate
/// nodes whose capacity cannot host the virtual node's demand, flow variables
/// on substrate edges that cannot carry the virtual edge's demand.
FFModel build_ff(const Instance& inst, const FFOptions& options = {});

/// Reads a mapping out of an integral solve: placements from the x block,
/// routes by walking the y arc support with loop erasure, so zero-cost
/// cycles that may ride along at no reduced cost are pruned.
/// Throws ExtractionFailure when the support does not decompose.
Mapping extract_mapping(const Instance& inst, const FFModelHandles& handles,
                        const mip::SolveOutcome& outcome);

/// Walks an arc multiset from one node to another, erasing loops; shared by
/// the flow extraction and the master's cut-edge path assembly.
std::vector<OrientedEdgeRef> walk_arc_support(const Graph& g,
                                              std::vector<OrientedEdgeRef> arcs,
                                              NodeId from, NodeId to);

}  // namespace vne
