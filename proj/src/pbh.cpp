#include "vne/pbh.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "vne/errors.hpp"
#include "vne/flow_form.hpp"
#include "vne/greedy.hpp"

namespace vne {

namespace {

using Clock = std::chrono::steady_clock;

NodeId view_center(const Graph& gs, const SubgraphView& view) {
  std::vector<int> local(static_cast<size_t>(gs.node_count()), -1);
  for (size_t i = 0; i < view.members.size(); ++i)
    local[static_cast<size_t>(view.members[i])] = static_cast<int>(i);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (EdgeId e : view.induced_edges)
    edges.push_back({local[static_cast<size_t>(gs.tail(e))],
                     local[static_cast<size_t>(gs.head(e))]});
  Graph induced = Graph::build(static_cast<int>(view.members.size()), edges,
                               /*allow_disconnected=*/true);
  std::vector<NodeId> all(view.members.size());
  std::iota(all.begin(), all.end(), 0);
  return view.members[static_cast<size_t>(closeness_center(induced, all))];
}

}  // namespace

PbhBatch generate_integer_columns(const Instance& inst, const PartitionContext& ctx,
                                  const std::vector<SubgraphView>& substrate_parts,
                                  const DualVector& duals, PbhPricer pricer,
                                  const std::vector<std::vector<Weight>>& dist,
                                  Rng& rng, const PbhConfig& config) {
  const int k = ctx.parts();
  if (static_cast<int>(substrate_parts.size()) < k)
    throw PartCountMismatch("substrate parts " +
                            std::to_string(substrate_parts.size()) +
                            " < virtual parts " + std::to_string(k));

  PbhBatch batch;
  batch.columns.assign(static_cast<size_t>(k), std::nullopt);

  // Random injective assignment of virtual parts to substrate parts.
  std::vector<int> perm(substrate_parts.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  batch.assignment.assign(perm.begin(), perm.begin() + k);

  // Tentative placements start at the assigned part's most central node.
  std::vector<NodeId> tentative(static_cast<size_t>(inst.virtual_nodes()), -1);
  for (int i = 0; i < k; ++i) {
    NodeId center = view_center(
        inst.snet,
        substrate_parts[static_cast<size_t>(batch.assignment[static_cast<size_t>(i)])]);
    for (NodeId v : ctx.part_nodes[static_cast<size_t>(i)])
      tentative[static_cast<size_t>(v)] = center;
  }

  for (int i = 0; i < k; ++i) {
    const SubgraphView& view =
        substrate_parts[static_cast<size_t>(batch.assignment[static_cast<size_t>(i)])];
    const auto& nodes = ctx.part_nodes[static_cast<size_t>(i)];

    // Placement costs, adjusted per boundary node by the distance to the
    // tentative placement of each cut-edge neighbor.
    std::vector<std::vector<std::int64_t>> adjusted(
        nodes.size(),
        std::vector<std::int64_t>(static_cast<size_t>(inst.substrate_nodes())));
    for (size_t local = 0; local < nodes.size(); ++local) {
      NodeId v = nodes[local];
      for (NodeId u = 0; u < inst.substrate_nodes(); ++u)
        adjusted[local][static_cast<size_t>(u)] =
            inst.node_cost[static_cast<size_t>(u)];
      if (!config.boundary_aware) continue;
      for (const auto& inc : inst.vnet.adjacent(v)) {
        if (ctx.cut_index_of[static_cast<size_t>(inc.edge)] < 0) continue;
        NodeId other = tentative[static_cast<size_t>(inc.neighbor)];
        if (other < 0) continue;
        for (NodeId u = 0; u < inst.substrate_nodes(); ++u) {
          Weight d = dist[static_cast<size_t>(other)][static_cast<size_t>(u)];
          if (d < kUnreachable)
            adjusted[local][static_cast<size_t>(u)] += d;
        }
      }
    }

    PricingOptions opt;
    opt.view = &view;
    opt.node_cost_override = &adjusted;
    opt.keep_nonnegative = true;  // integer batches keep every priced column
    opt.time_limit = config.pricer_time_limit;
    opt.greedy_restarts = config.greedy_restarts;
    opt.seed = rng.next_u64();
    PriceResult res = pricer == PbhPricer::Exact
                          ? price_exact(inst, ctx, i, duals, opt)
                          : price_greedy(inst, ctx, i, duals, opt);
    if (!res.column) continue;  // skipped part; caller retries the batch
    for (auto [v, u] : res.column->placements)
      tentative[static_cast<size_t>(v)] = u;
    batch.columns[static_cast<size_t>(i)] = std::move(res.column);
  }
  return batch;
}

std::optional<Mapping> assemble_mapping(
    const Instance& inst, const PartitionContext& ctx,
    const std::vector<const Column*>& chosen,
    const std::vector<std::vector<OrientedEdgeRef>>& cut_routes) {
  Mapping m;
  m.node_place.assign(static_cast<size_t>(inst.virtual_nodes()), -1);
  m.edge_route.assign(static_cast<size_t>(inst.vnet.edge_count()), {});
  for (const Column* col : chosen) {
    if (!col) return std::nullopt;
    for (auto [v, u] : col->placements) m.node_place[static_cast<size_t>(v)] = u;
    for (const auto& [e, route] : col->routes)
      m.edge_route[static_cast<size_t>(e)] = route;
  }
  for (size_t c = 0; c < ctx.cut.size(); ++c) {
    if (cut_routes[c].empty()) return std::nullopt;
    m.edge_route[static_cast<size_t>(ctx.cut[c])] = cut_routes[c];
  }
  if (!validate(inst, m).ok()) return std::nullopt;
  return m;
}

namespace {

/// Cut-edge routes for a completed batch, cheapest path on the residual
/// capacities left by the batch's own columns.
std::optional<std::vector<std::vector<OrientedEdgeRef>>> route_cuts_greedy(
    const Instance& inst, const PartitionContext& ctx,
    const std::vector<const Column*>& chosen) {
  ResidualState residual = ResidualState::from(inst);
  std::vector<NodeId> place(static_cast<size_t>(inst.virtual_nodes()), -1);
  for (const Column* col : chosen) {
    if (!col) return std::nullopt;
    for (auto [v, u] : col->placements) place[static_cast<size_t>(v)] = u;
    for (const auto& [e, route] : col->routes)
      for (const auto& arc : route)
        residual.edge_remaining[static_cast<size_t>(arc.edge)] -=
            inst.edge_demand[static_cast<size_t>(e)];
  }
  std::vector<std::vector<OrientedEdgeRef>> routes(ctx.cut.size());
  for (size_t c = 0; c < ctx.cut.size(); ++c) {
    EdgeId ce = ctx.cut[c];
    NodeId from = place[static_cast<size_t>(inst.vnet.tail(ce))];
    NodeId to = place[static_cast<size_t>(inst.vnet.head(ce))];
    std::int64_t demand = inst.edge_demand[static_cast<size_t>(ce)];
    auto path = route_cheapest_residual(inst, residual, from, to, demand);
    if (!path) return std::nullopt;
    for (const auto& arc : *path)
      residual.edge_remaining[static_cast<size_t>(arc.edge)] -= demand;
    routes[c] = std::move(*path);
  }
  return routes;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::int64_t> pbh_column_key(const Column& col) {
  std::vector<std::int64_t> key{col.part};
  for (auto [v, u] : col.placements) {
    key.push_back(v);
    key.push_back(u);
  }
  for (const auto& [e, route] : col.routes) {
    key.push_back(-e - 1);
    for (const auto& arc : route)
      key.push_back(arc.edge * 2 + (arc.reverse ? 1 : 0));
  }
  return key;
}

}  // namespace

PbhResult solve_pbh(const Instance& inst, const PbhConfig& config) {
  auto t0 = Clock::now();
  PbhResult result;

  const int kr = config.k_r > 0 ? config.k_r
                                : std::max(1, inst.virtual_nodes() / 10);
  result.report.k_r = kr;
  Partition vp = config.virtual_partition
                     ? *config.virtual_partition
                     : partition_balanced_connected(inst.vnet, kr, config.seed);
  PartitionContext ctx = PartitionContext::build(inst, vp);

  // Strict substrate partition, balanced on capacitated-node counts, sized so
  // the average part holds about substrate_ratio times the largest virtual
  // part. Zero-capacity nodes still belong to parts and carry routing there.
  std::vector<std::int64_t> weights(static_cast<size_t>(inst.substrate_nodes()));
  std::int64_t cap_count = 0;
  for (NodeId u = 0; u < inst.substrate_nodes(); ++u) {
    weights[static_cast<size_t>(u)] =
        inst.node_capacity[static_cast<size_t>(u)] > 0;
    cap_count += weights[static_cast<size_t>(u)];
  }
  if (cap_count < ctx.parts()) {
    result.report.wall_seconds = seconds_since(t0);
    return result;  // not enough capacitated nodes to host every part
  }
  Partition sp;
  if (config.substrate_partition) {
    sp = *config.substrate_partition;
  } else {
    std::int64_t max_vpart = 0;
    for (const auto& nodes : ctx.part_nodes)
      max_vpart = std::max<std::int64_t>(
          max_vpart, static_cast<std::int64_t>(nodes.size()));
    // Floor: erring toward larger parts keeps the sub-pricers feasible;
    // undersized substrate parts cannot host their virtual part at all.
    int ks = static_cast<int>(
        static_cast<double>(cap_count) /
        (config.substrate_ratio * static_cast<double>(max_vpart)));
    ks = std::clamp(ks, ctx.parts(),
                    static_cast<int>(std::min<std::int64_t>(
                        cap_count, inst.substrate_nodes())));
    sp = partition_balanced_connected(inst.snet, ks,
                                      Rng::derive(config.seed, 0x5b), weights);
  }
  result.report.k_s = sp.k;
  if (sp.k < ctx.parts())
    throw PartCountMismatch("substrate partition smaller than virtual one");
  std::vector<SubgraphView> substrate_views;
  substrate_views.reserve(static_cast<size_t>(sp.k));
  for (int j = 0; j < sp.k; ++j)
    substrate_views.push_back(part_view(inst.snet, sp, j));

  auto dist = all_pairs_distances(inst.snet, inst.edge_cost);

  // Column accumulation; the growing relaxed master supplies duals after
  // every batch (one LP re-solve per k_r new columns).
  std::vector<std::vector<Column>> pool(static_cast<size_t>(ctx.parts()));
  std::map<std::vector<std::int64_t>, std::pair<int, int>> pool_index;
  int pool_size = 0;
  MasterModel relaxed_master =
      build_master(inst, ctx, pool, false, ArtificialMode::Always);
  mip::LpEngine engine(relaxed_master.model);
  engine.solve();

  DualVector duals = DualVector::zeros(inst, ctx);  // zero for the first batch
  Rng rng(Rng::derive(config.seed, 0xba7c4));

  std::optional<Mapping> candidate;
  std::int64_t candidate_cost = 0;
  std::vector<int> candidate_pool_ids;

  auto add_column = [&](const Column& col) -> bool {
    auto key = pbh_column_key(col);
    if (pool_index.count(key)) return false;
    int idx = static_cast<int>(pool[static_cast<size_t>(col.part)].size());
    pool_index[key] = {col.part, idx};
    pool[static_cast<size_t>(col.part)].push_back(col);
    engine.add_column(0.0, 1.0, static_cast<double>(col.cost),
                      column_row_terms(relaxed_master.layout, col));
    ++pool_size;
    return true;
  };

  int stalls = 0;
  while (pool_size < config.column_target && stalls < 5 &&
         seconds_since(t0) < config.rmp_time_limit) {
    int added = 0;
    bool complete = false;
    std::vector<const Column*> batch_cols;
    for (int attempt = 0; attempt < config.max_batch_retries && !complete;
         ++attempt) {
      PbhBatch batch = generate_integer_columns(
          inst, ctx, substrate_views, duals, config.pricer, dist, rng, config);
      complete = true;
      batch_cols.assign(static_cast<size_t>(ctx.parts()), nullptr);
      for (int i = 0; i < ctx.parts(); ++i) {
        auto& col = batch.columns[static_cast<size_t>(i)];
        if (!col) {
          complete = false;
          continue;
        }
        added += add_column(*col);
        auto [part, idx] = pool_index[pbh_column_key(*col)];
        batch_cols[static_cast<size_t>(i)] =
            &pool[static_cast<size_t>(part)][static_cast<size_t>(idx)];
      }
    }
    if (complete) {
      // A completed batch is integrally composable by construction; keep the
      // cheapest assembled one as the integer master's warm start.
      if (auto routes = route_cuts_greedy(inst, ctx, batch_cols)) {
        if (auto m = assemble_mapping(inst, ctx, batch_cols, *routes)) {
          std::int64_t cost = mapping_cost(inst, *m);
          if (!candidate || cost < candidate_cost) {
            candidate = std::move(m);
            candidate_cost = cost;
            candidate_pool_ids.clear();
            for (const Column* col : batch_cols)
              candidate_pool_ids.push_back(
                  pool_index[pbh_column_key(*col)].second);
          }
        }
      }
    }
    if (added == 0) {
      ++stalls;
      continue;
    }
    stalls = 0;
    if (engine.solve() == mip::Status::Optimal)
      duals = extract_duals(inst, ctx, relaxed_master.layout, engine.duals());
  }

  result.report.columns = pool_size;
  for (const auto& part_pool : pool)
    if (part_pool.empty()) {
      result.report.wall_seconds = seconds_since(t0);
      return result;  // a part never priced: the master cannot cover it
    }

  // Integer restricted master over the accumulated pool.
  MasterModel integer_master =
      build_master(inst, ctx, pool, true, ArtificialMode::None);
  std::vector<double> start;
  const std::vector<double>* start_ptr = nullptr;
  if (candidate) {
    start.assign(static_cast<size_t>(integer_master.model.var_count()), 0.0);
    for (int i = 0; i < ctx.parts(); ++i)
      start[static_cast<size_t>(
          integer_master.layout.lambda[static_cast<size_t>(i)][static_cast<size_t>(
              candidate_pool_ids[static_cast<size_t>(i)])])] = 1.0;
    for (size_t c = 0; c < ctx.cut.size(); ++c) {
      for (const auto& arc :
           candidate->edge_route[static_cast<size_t>(ctx.cut[c])]) {
        mip::VarId id = integer_master.layout.y[c][static_cast<size_t>(arc.edge)]
                                                 [arc.reverse ? 1 : 0];
        if (id >= 0) start[static_cast<size_t>(id)] = 1.0;
      }
    }
    start_ptr = &start;
  }
  double remaining = config.rmp_time_limit - seconds_since(t0);
  auto out = mip::solve_mip(integer_master.model, std::max(1.0, remaining),
                            start_ptr);
  result.report.status = out.status;
  result.report.master_bound = out.bound;
  result.report.master_nodes = out.nodes;
  if (out.status != mip::Status::Optimal &&
      out.status != mip::Status::Feasible) {
    result.report.wall_seconds = seconds_since(t0);
    return result;
  }

  // Assemble the selected columns plus the master's cut-edge flows.
  std::vector<const Column*> chosen(static_cast<size_t>(ctx.parts()), nullptr);
  for (int i = 0; i < ctx.parts(); ++i) {
    const auto& ids = integer_master.layout.lambda[static_cast<size_t>(i)];
    for (size_t c = 0; c < ids.size(); ++c)
      if (out.primal[static_cast<size_t>(ids[c])] > 0.5) {
        chosen[static_cast<size_t>(i)] = &pool[static_cast<size_t>(i)][c];
        break;
      }
  }
  std::vector<std::vector<OrientedEdgeRef>> cut_routes(ctx.cut.size());
  try {
    for (size_t c = 0; c < ctx.cut.size(); ++c) {
      std::vector<OrientedEdgeRef> arcs;
      for (EdgeId es = 0; es < inst.snet.edge_count(); ++es) {
        const auto& pair = integer_master.layout.y[c][static_cast<size_t>(es)];
        if (pair[0] >= 0 && out.primal[static_cast<size_t>(pair[0])] > 0.5)
          arcs.push_back({es, false});
        if (pair[1] >= 0 && out.primal[static_cast<size_t>(pair[1])] > 0.5)
          arcs.push_back({es, true});
      }
      EdgeId ce = ctx.cut[c];
      NodeId from = -1, to = -1;
      for (const Column* col : chosen) {
        if (!col) continue;
        for (auto [v, u] : col->placements) {
          if (v == inst.vnet.tail(ce)) from = u;
          if (v == inst.vnet.head(ce)) to = u;
        }
      }
      cut_routes[c] = walk_arc_support(inst.snet, std::move(arcs), from, to);
    }
  } catch (const ExtractionFailure&) {
    result.report.status = mip::Status::NoSolutionFound;
    result.report.wall_seconds = seconds_since(t0);
    return result;
  }
  auto mapping = assemble_mapping(inst, ctx, chosen, cut_routes);
  if (!mapping) {
    result.report.status = mip::Status::NoSolutionFound;
    result.report.wall_seconds = seconds_since(t0);
    return result;
  }
  result.report.cost = mapping_cost(inst, *mapping);
  result.mapping = std::move(mapping);
  result.report.wall_seconds = seconds_since(t0);
  return result;
}

}  // namespace vne
