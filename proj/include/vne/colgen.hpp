#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "vne/greedy.hpp"
#include "vne/instance.hpp"
#include "vne/mip.hpp"
#include "vne/partition.hpp"

namespace vne {

/// A virtual partition together with the derived index structures every
/// master/pricer needs: per-part node and internal edge lists, the cut edge
/// list, and reverse indexes.
struct PartitionContext {
  Partition partition;
  std::vector<std::vector<NodeId>> part_nodes;
  std::vector<std::vector<EdgeId>> part_edges;  // internal edges per part
  std::vector<EdgeId> cut;                      // ascending edge ids
  std::vector<int> cut_index_of;                // edge id -> cut index or -1

  int parts() const { return partition.k; }
  static PartitionContext build(const Instance& inst, Partition p);
};

/// A feasible sub-mapping of one virtual part, with its true cost and the
/// sparse master-constraint footprint.
struct Column {
  int part = -1;
  /// (virtual node, substrate node), ascending by virtual node.
  std::vector<std::pair<NodeId, NodeId>> placements;
  /// (virtual edge id, route), ascending by edge id; internal edges only.
  std::vector<std::pair<EdgeId, std::vector<OrientedEdgeRef>>> routes;
  std::int64_t cost = 0;

  // Footprint, recomputable from the sub-mapping (and checked so in tests).
  std::vector<std::pair<NodeId, double>> host;              // one-to-one rows
  std::vector<std::pair<NodeId, double>> node_load;         // node capacity
  std::vector<std::pair<EdgeId, double>> edge_load;         // edge capacity
  std::vector<std::tuple<int, NodeId, double>> flow;        // (cut, node, +-1)
  std::vector<std::tuple<int, NodeId, double>> depart_s;    // (cut, node, 1)
  std::vector<std::tuple<int, NodeId, double>> depart_t;

  friend bool operator==(const Column&, const Column&) = default;
};

/// Part-local pricing instance: the part's induced virtual subgraph over the
/// full substrate, plus the local-to-full id maps.
struct PartInstance {
  Instance inst;
  std::vector<NodeId> vnode_ids;
  std::vector<EdgeId> vedge_ids;
};

PartInstance make_part_instance(const Instance& inst, const PartitionContext& ctx,
                                int part);

/// Builds a column (cost + footprint) from a sub-mapping expressed on a
/// PartInstance.
Column make_column(const Instance& inst, const PartitionContext& ctx, int part,
                   const PartInstance& pi, const Mapping& sub);

/// Dual values per master constraint family, plus nothing else; the smoothed
/// counterpart is just another DualVector.
struct DualVector {
  std::vector<double> theta;                   // convexity, >= 0
  std::vector<std::vector<double>> alpha;      // [cut][substrate node], free
  std::vector<double> phi;                     // one-to-one, <= 0
  std::vector<double> beta_node;               // node capacity, <= 0
  std::vector<double> beta_edge;               // edge capacity, <= 0
  std::vector<std::vector<double>> gamma_s;    // departure (source), <= 0
  std::vector<std::vector<double>> gamma_t;    // departure (target), <= 0

  static DualVector zeros(const Instance& inst, const PartitionContext& ctx);
};

/// Element-wise convex combination: sigma * previous + (1 - sigma) * current.
DualVector smooth_duals(const DualVector& prev_smoothed, const DualVector& current,
                        double sigma = 0.9);

/// Cost w_m minus the dual-weighted footprint; the artifact's independent
/// check for every pricer's reported reduced cost.
double reduced_cost_from_master(const Column& col, const DualVector& duals);

/// Cost bound that exceeds any feasible mapping's cost: artificial columns
/// carry it so they never survive into a converged solution.
double artificial_cost(const Instance& inst);

enum class ArtificialMode { ForEmptyParts, Always, None };

struct MasterLayout {
  std::vector<mip::RowId> convexity;                  // per part
  std::vector<std::vector<mip::RowId>> flow;          // [cut][node]
  std::vector<mip::RowId> one_to_one;                 // per node
  std::vector<mip::RowId> node_cap;                   // per node
  std::vector<mip::RowId> edge_cap;                   // per edge
  std::vector<std::vector<mip::RowId>> depart_s;      // [cut][node]
  std::vector<std::vector<mip::RowId>> depart_t;      // [cut][node]
  std::vector<std::vector<mip::VarId>> lambda;        // [part][pool index]
  std::vector<mip::VarId> artificial;                 // per part or -1
  std::vector<std::vector<std::array<mip::VarId, 2>>> y;  // [cut][edge][dir]
};

struct MasterModel {
  mip::Model model;
  MasterLayout layout;
};

/// Restricted master over the given pool: sub-mapping selection, cut-edge
/// bidirected flows, shared capacities, departure inequalities.
MasterModel build_master(const Instance& inst, const PartitionContext& ctx,
                         const std::vector<std::vector<Column>>& pool,
                         bool integer = false,
                         ArtificialMode artificials = ArtificialMode::ForEmptyParts);

DualVector extract_duals(const Instance& inst, const PartitionContext& ctx,
                         const MasterLayout& layout, const std::vector<double>& row_duals);

/// Master-row sparse coefficients of a column (for incremental column adds).
std::vector<std::pair<mip::RowId, double>> column_row_terms(
    const MasterLayout& layout, const Column& col);

struct PriceResult {
  std::optional<Column> column;
  double reduced_cost = 0.0;     // as reported by the pricer
  bool proven_optimal = false;   // true minimum over its search space
};

/// Extra knobs shared by both pricers. node_cost_override substitutes the
/// plain substrate node costs in the pricing objective (boundary-aware
/// integer column generation passes adjusted costs here).
struct PricingOptions {
  const SubgraphView* view = nullptr;
  const std::vector<std::vector<std::int64_t>>* node_cost_override = nullptr;
  double time_limit = 60.0;
  int greedy_restarts = 100;
  std::uint64_t seed = 0;
  bool keep_nonnegative = false;  // return the best column even if rc >= 0
};

/// Exact pricer: the embedding model of the part over the substrate (or a
/// view) with reduced-cost objective coefficients. The result is a validity
/// certificate only in full-substrate mode.
PriceResult price_exact(const Instance& inst, const PartitionContext& ctx,
                        int part, const DualVector& duals,
                        const PricingOptions& options = {});

/// Greedy pricer: best reduced cost across randomized restarts; never a
/// certificate. Returns a column only when the reduced cost is negative
/// (unless keep_nonnegative).
PriceResult price_greedy(const Instance& inst, const PartitionContext& ctx,
                         int part, const DualVector& duals,
                         const PricingOptions& options = {});

/// Valid lower bound from a solved master and true per-part pricing optima.
double lagrangian_bound(double v_rmp, const std::vector<double>& pricer_optima);

struct CgConfig {
  int k_r = 0;  // 0 -> floor(n_r / 10), clamped to >= 1
  std::optional<Partition> partition;  // externally supplied split
  std::uint64_t seed = 0;
  double sigma = 0.9;  // dual smoothing weight
  int greedy_phase_columns = 800;
  int max_columns = 2500;  // cap counting every generated column
  int greedy_restarts = 100;
  double exact_sub_phase_seconds = 1200.0;
  double total_seconds = 3600.0;
  double pricer_time_limit = 60.0;
  int max_iterations = 2000;
  std::string log_csv;  // per-iteration run log, empty = none
};

struct CgIterationLog {
  int iteration;
  std::string phase;  // greedy | exact-sub | exact
  double v_rmp;
  double lgb;  // running best; -inf before the first valid bound
  int columns_added;
  int pool_size;
  double wall_seconds;
};

struct CgResult {
  double v_rmp = mip::kInf;   // last master LP value
  double lgb = -mip::kInf;    // best Lagrangian bound seen
  double gap = mip::kInf;     // (v_rmp - lgb) / max(1, |v_rmp|)
  bool converged = false;
  bool infeasible_for_partition = false;
  int columns_generated = 0;
  double wall_seconds = 0.0;
  double max_rc_deviation = 0.0;  // pricer claim vs footprint recomputation
  std::vector<double> lgb_history;
  std::vector<CgIterationLog> log;
  Partition partition_used;
  std::vector<std::vector<Column>> pool;
};

/// The lower-bound engine: greedy sub-pricers, then exact sub-pricers, then
/// exact full pricers with Lagrangian bounds, smoothing active throughout.
CgResult run_lower_bound(const Instance& inst, const CgConfig& config);

void write_cg_log_csv(const std::vector<CgIterationLog>& log, const std::string& path);

}  // namespace vne
