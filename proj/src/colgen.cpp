#include "vne/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "vne/errors.hpp"
#include "vne/flow_form.hpp"
#include "vne/rng.hpp"

namespace vne {

using mip::RowId;
using mip::Sense;
using mip::VarId;

PartitionContext PartitionContext::build(const Instance& inst, Partition p) {
  check_partition(inst.vnet, p);
  PartitionContext ctx;
  ctx.part_nodes.assign(static_cast<size_t>(p.k), {});
  for (NodeId v = 0; v < inst.virtual_nodes(); ++v)
    ctx.part_nodes[static_cast<size_t>(p.part_of[static_cast<size_t>(v)])].push_back(v);
  ctx.part_edges.assign(static_cast<size_t>(p.k), {});
  ctx.cut_index_of.assign(static_cast<size_t>(inst.vnet.edge_count()), -1);
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) {
    int pa = p.part_of[static_cast<size_t>(inst.vnet.tail(e))];
    int pb = p.part_of[static_cast<size_t>(inst.vnet.head(e))];
    if (pa == pb) {
      ctx.part_edges[static_cast<size_t>(pa)].push_back(e);
    } else {
      ctx.cut_index_of[static_cast<size_t>(e)] = static_cast<int>(ctx.cut.size());
      ctx.cut.push_back(e);
    }
  }
  ctx.partition = std::move(p);
  return ctx;
}

PartInstance make_part_instance(const Instance& inst, const PartitionContext& ctx,
                                int part) {
  PartInstance pi;
  pi.vnode_ids = ctx.part_nodes[static_cast<size_t>(part)];
  pi.vedge_ids = ctx.part_edges[static_cast<size_t>(part)];
  std::vector<int> local_of(static_cast<size_t>(inst.virtual_nodes()), -1);
  for (size_t i = 0; i < pi.vnode_ids.size(); ++i)
    local_of[static_cast<size_t>(pi.vnode_ids[i])] = static_cast<int>(i);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (EdgeId e : pi.vedge_ids)
    edges.push_back({local_of[static_cast<size_t>(inst.vnet.tail(e))],
                     local_of[static_cast<size_t>(inst.vnet.head(e))]});
  pi.inst.vnet = Graph::build(static_cast<int>(pi.vnode_ids.size()), edges);
  pi.inst.snet = inst.snet;
  for (NodeId v : pi.vnode_ids)
    pi.inst.node_demand.push_back(inst.node_demand[static_cast<size_t>(v)]);
  for (EdgeId e : pi.vedge_ids)
    pi.inst.edge_demand.push_back(inst.edge_demand[static_cast<size_t>(e)]);
  pi.inst.node_capacity = inst.node_capacity;
  pi.inst.edge_capacity = inst.edge_capacity;
  pi.inst.node_cost = inst.node_cost;
  pi.inst.edge_cost = inst.edge_cost;
  return pi;
}

Column make_column(const Instance& inst, const PartitionContext& ctx, int part,
                   const PartInstance& pi, const Mapping& sub) {
  Column col;
  col.part = part;
  col.cost = mapping_cost(pi.inst, sub);

  std::vector<NodeId> place_of_full(static_cast<size_t>(inst.virtual_nodes()), -1);
  for (size_t local = 0; local < pi.vnode_ids.size(); ++local) {
    NodeId full = pi.vnode_ids[local];
    NodeId u = sub.node_place[local];
    col.placements.push_back({full, u});
    place_of_full[static_cast<size_t>(full)] = u;
    col.host.push_back({u, 1.0});
    col.node_load.push_back(
        {u, static_cast<double>(inst.node_demand[static_cast<size_t>(full)])});
  }
  std::map<EdgeId, double> load;
  for (size_t local = 0; local < pi.vedge_ids.size(); ++local) {
    EdgeId full = pi.vedge_ids[local];
    col.routes.push_back({full, sub.edge_route[local]});
    for (const auto& arc : sub.edge_route[local])
      load[arc.edge] +=
          static_cast<double>(inst.edge_demand[static_cast<size_t>(full)]);
  }
  col.edge_load.assign(load.begin(), load.end());

  for (size_t k = 0; k < ctx.cut.size(); ++k) {
    EdgeId ce = ctx.cut[k];
    NodeId s = inst.vnet.tail(ce);
    NodeId t = inst.vnet.head(ce);
    if (NodeId u = place_of_full[static_cast<size_t>(s)]; u >= 0) {
      col.flow.push_back({static_cast<int>(k), u, 1.0});
      col.depart_s.push_back({static_cast<int>(k), u, 1.0});
    }
    if (NodeId u = place_of_full[static_cast<size_t>(t)]; u >= 0) {
      col.flow.push_back({static_cast<int>(k), u, -1.0});
      col.depart_t.push_back({static_cast<int>(k), u, 1.0});
    }
  }
  return col;
}

DualVector DualVector::zeros(const Instance& inst, const PartitionContext& ctx) {
  DualVector d;
  d.theta.assign(static_cast<size_t>(ctx.parts()), 0.0);
  d.alpha.assign(ctx.cut.size(),
                 std::vector<double>(static_cast<size_t>(inst.substrate_nodes()), 0.0));
  d.phi.assign(static_cast<size_t>(inst.substrate_nodes()), 0.0);
  d.beta_node.assign(static_cast<size_t>(inst.substrate_nodes()), 0.0);
  d.beta_edge.assign(static_cast<size_t>(inst.snet.edge_count()), 0.0);
  d.gamma_s = d.alpha;
  d.gamma_t = d.alpha;
  return d;
}

namespace {

void combine(std::vector<double>& out, const std::vector<double>& prev,
             const std::vector<double>& cur, double sigma) {
  out.resize(cur.size());
  for (size_t i = 0; i < cur.size(); ++i)
    out[i] = sigma * prev[i] + (1.0 - sigma) * cur[i];
}

}  // namespace

DualVector smooth_duals(const DualVector& prev_smoothed, const DualVector& current,
                        double sigma) {
  DualVector out;
  combine(out.theta, prev_smoothed.theta, current.theta, sigma);
  combine(out.phi, prev_smoothed.phi, current.phi, sigma);
  combine(out.beta_node, prev_smoothed.beta_node, current.beta_node, sigma);
  combine(out.beta_edge, prev_smoothed.beta_edge, current.beta_edge, sigma);
  out.alpha.resize(current.alpha.size());
  out.gamma_s.resize(current.gamma_s.size());
  out.gamma_t.resize(current.gamma_t.size());
  for (size_t k = 0; k < current.alpha.size(); ++k) {
    combine(out.alpha[k], prev_smoothed.alpha[k], current.alpha[k], sigma);
    combine(out.gamma_s[k], prev_smoothed.gamma_s[k], current.gamma_s[k], sigma);
    combine(out.gamma_t[k], prev_smoothed.gamma_t[k], current.gamma_t[k], sigma);
  }
  return out;
}

double reduced_cost_from_master(const Column& col, const DualVector& duals) {
  double dot = duals.theta[static_cast<size_t>(col.part)];
  for (auto [u, c] : col.host) dot += duals.phi[static_cast<size_t>(u)] * c;
  for (auto [u, c] : col.node_load)
    dot += duals.beta_node[static_cast<size_t>(u)] * c;
  for (auto [e, c] : col.edge_load)
    dot += duals.beta_edge[static_cast<size_t>(e)] * c;
  for (auto [k, u, c] : col.flow)
    dot += duals.alpha[static_cast<size_t>(k)][static_cast<size_t>(u)] * c;
  for (auto [k, u, c] : col.depart_s)
    dot += duals.gamma_s[static_cast<size_t>(k)][static_cast<size_t>(u)] * c;
  for (auto [k, u, c] : col.depart_t)
    dot += duals.gamma_t[static_cast<size_t>(k)][static_cast<size_t>(u)] * c;
  return static_cast<double>(col.cost) - dot;
}

double artificial_cost(const Instance& inst) {
  std::int64_t demand_sum = 0;
  for (auto d : inst.node_demand) demand_sum += d;
  for (auto d : inst.edge_demand) demand_sum += d;
  std::int64_t max_cost = 1;
  for (auto w : inst.node_cost) max_cost = std::max(max_cost, w);
  for (auto w : inst.edge_cost) max_cost = std::max(max_cost, w);
  return static_cast<double>(demand_sum) * static_cast<double>(max_cost) *
             static_cast<double>(inst.substrate_nodes()) +
         1.0;
}

std::vector<std::pair<RowId, double>> column_row_terms(const MasterLayout& layout,
                                                       const Column& col) {
  std::vector<std::pair<RowId, double>> terms;
  terms.push_back({layout.convexity[static_cast<size_t>(col.part)], 1.0});
  for (auto [k, u, c] : col.flow)
    terms.push_back({layout.flow[static_cast<size_t>(k)][static_cast<size_t>(u)], c});
  for (auto [u, c] : col.host)
    terms.push_back({layout.one_to_one[static_cast<size_t>(u)], c});
  for (auto [u, c] : col.node_load)
    terms.push_back({layout.node_cap[static_cast<size_t>(u)], c});
  for (auto [e, c] : col.edge_load)
    terms.push_back({layout.edge_cap[static_cast<size_t>(e)], c});
  for (auto [k, u, c] : col.depart_s)
    terms.push_back({layout.depart_s[static_cast<size_t>(k)][static_cast<size_t>(u)], c});
  for (auto [k, u, c] : col.depart_t)
    terms.push_back({layout.depart_t[static_cast<size_t>(k)][static_cast<size_t>(u)], c});
  return terms;
}

MasterModel build_master(const Instance& inst, const PartitionContext& ctx,
                         const std::vector<std::vector<Column>>& pool,
                         bool integer, ArtificialMode artificials) {
  const int k = ctx.parts();
  const int ns = inst.substrate_nodes();
  const int ms = inst.snet.edge_count();
  const int ncut = static_cast<int>(ctx.cut.size());
  MasterModel mm;
  MasterLayout& L = mm.layout;
  mip::Model& m = mm.model;

  // Planned row ids: convexity, flow, one-to-one, node caps, edge caps,
  // departures (source then target), laid out contiguously in that order.
  int next = 0;
  L.convexity.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) L.convexity[static_cast<size_t>(i)] = next++;
  L.flow.assign(static_cast<size_t>(ncut), std::vector<RowId>(static_cast<size_t>(ns)));
  for (int c = 0; c < ncut; ++c)
    for (int u = 0; u < ns; ++u) L.flow[static_cast<size_t>(c)][static_cast<size_t>(u)] = next++;
  L.one_to_one.resize(static_cast<size_t>(ns));
  for (int u = 0; u < ns; ++u) L.one_to_one[static_cast<size_t>(u)] = next++;
  L.node_cap.resize(static_cast<size_t>(ns));
  for (int u = 0; u < ns; ++u) L.node_cap[static_cast<size_t>(u)] = next++;
  L.edge_cap.resize(static_cast<size_t>(ms));
  for (int e = 0; e < ms; ++e) L.edge_cap[static_cast<size_t>(e)] = next++;
  L.depart_s.assign(static_cast<size_t>(ncut), std::vector<RowId>(static_cast<size_t>(ns)));
  L.depart_t.assign(static_cast<size_t>(ncut), std::vector<RowId>(static_cast<size_t>(ns)));
  for (int c = 0; c < ncut; ++c)
    for (int u = 0; u < ns; ++u) L.depart_s[static_cast<size_t>(c)][static_cast<size_t>(u)] = next++;
  for (int c = 0; c < ncut; ++c)
    for (int u = 0; u < ns; ++u) L.depart_t[static_cast<size_t>(c)][static_cast<size_t>(u)] = next++;
  const int row_count = next;
  std::vector<std::vector<std::pair<VarId, double>>> terms(
      static_cast<size_t>(row_count));

  // Variables: per-part columns, artificials, then cut-edge flows.
  L.lambda.assign(static_cast<size_t>(k), {});
  L.artificial.assign(static_cast<size_t>(k), -1);
  const double big_m = artificial_cost(inst);
  for (int i = 0; i < k; ++i) {
    for (const Column& col : pool[static_cast<size_t>(i)]) {
      VarId id = m.add_var(0.0, 1.0, static_cast<double>(col.cost), integer,
                           /*branch_priority=*/1);
      L.lambda[static_cast<size_t>(i)].push_back(id);
      for (auto [row, coef] : column_row_terms(L, col))
        terms[static_cast<size_t>(row)].push_back({id, coef});
    }
    bool want_artificial =
        artificials == ArtificialMode::Always ||
        (artificials == ArtificialMode::ForEmptyParts &&
         pool[static_cast<size_t>(i)].empty());
    if (want_artificial) {
      VarId id = m.add_var(0.0, 1.0, big_m, false);
      L.artificial[static_cast<size_t>(i)] = id;
      terms[static_cast<size_t>(L.convexity[static_cast<size_t>(i)])].push_back({id, 1.0});
    }
  }

  L.y.assign(static_cast<size_t>(ncut),
             std::vector<std::array<VarId, 2>>(static_cast<size_t>(ms),
                                               std::array<VarId, 2>{-1, -1}));
  for (int c = 0; c < ncut; ++c) {
    EdgeId ce = ctx.cut[static_cast<size_t>(c)];
    double demand = static_cast<double>(inst.edge_demand[static_cast<size_t>(ce)]);
    for (EdgeId es = 0; es < ms; ++es) {
      if (inst.edge_capacity[static_cast<size_t>(es)] <
          inst.edge_demand[static_cast<size_t>(ce)])
        continue;
      double obj = demand * static_cast<double>(inst.edge_cost[static_cast<size_t>(es)]);
      for (int dir = 0; dir < 2; ++dir) {
        VarId id = m.add_var(0.0, 1.0, obj, integer);
        L.y[static_cast<size_t>(c)][static_cast<size_t>(es)][static_cast<size_t>(dir)] = id;
      }
      // Flow rows: out-arcs negative, in-arcs positive, at both endpoints.
      NodeId a = inst.snet.tail(es), b = inst.snet.head(es);
      VarId fwd = L.y[static_cast<size_t>(c)][static_cast<size_t>(es)][0];
      VarId rev = L.y[static_cast<size_t>(c)][static_cast<size_t>(es)][1];
      auto& flow_a = terms[static_cast<size_t>(L.flow[static_cast<size_t>(c)][static_cast<size_t>(a)])];
      auto& flow_b = terms[static_cast<size_t>(L.flow[static_cast<size_t>(c)][static_cast<size_t>(b)])];
      flow_a.push_back({fwd, -1.0});
      flow_a.push_back({rev, 1.0});
      flow_b.push_back({fwd, 1.0});
      flow_b.push_back({rev, -1.0});
      auto& cap = terms[static_cast<size_t>(L.edge_cap[static_cast<size_t>(es)])];
      cap.push_back({fwd, demand});
      cap.push_back({rev, demand});
      auto& ds_a = terms[static_cast<size_t>(L.depart_s[static_cast<size_t>(c)][static_cast<size_t>(a)])];
      auto& ds_b = terms[static_cast<size_t>(L.depart_s[static_cast<size_t>(c)][static_cast<size_t>(b)])];
      auto& dt_a = terms[static_cast<size_t>(L.depart_t[static_cast<size_t>(c)][static_cast<size_t>(a)])];
      auto& dt_b = terms[static_cast<size_t>(L.depart_t[static_cast<size_t>(c)][static_cast<size_t>(b)])];
      ds_a.push_back({fwd, -1.0});  // outgoing at a
      ds_b.push_back({rev, -1.0});  // outgoing at b
      dt_a.push_back({rev, -1.0});  // incoming at a
      dt_b.push_back({fwd, -1.0});  // incoming at b
    }
  }

  // Emit rows in planned order.
  for (int r = 0; r < row_count; ++r) {
    Sense sense;
    double rhs;
    if (r < k) {
      sense = Sense::GreaterEqual;
      rhs = 1.0;
    } else if (r < k + ncut * ns) {
      sense = Sense::Equal;
      rhs = 0.0;
    } else if (r < k + ncut * ns + ns) {
      sense = Sense::LessEqual;
      rhs = 1.0;
    } else if (r < k + ncut * ns + 2 * ns) {
      int u = r - (k + ncut * ns + ns);
      sense = Sense::LessEqual;
      rhs = static_cast<double>(inst.node_capacity[static_cast<size_t>(u)]);
    } else if (r < k + ncut * ns + 2 * ns + ms) {
      int e = r - (k + ncut * ns + 2 * ns);
      sense = Sense::LessEqual;
      rhs = static_cast<double>(inst.edge_capacity[static_cast<size_t>(e)]);
    } else {
      sense = Sense::LessEqual;
      rhs = 0.0;
    }
    RowId got = m.add_row(std::move(terms[static_cast<size_t>(r)]), sense, rhs);
    (void)got;
  }
  return mm;
}

DualVector extract_duals(const Instance& inst, const PartitionContext& ctx,
                         const MasterLayout& layout,
                         const std::vector<double>& row_duals) {
  DualVector d = DualVector::zeros(inst, ctx);
  for (size_t i = 0; i < layout.convexity.size(); ++i)
    d.theta[i] = row_duals[static_cast<size_t>(layout.convexity[i])];
  for (size_t c = 0; c < layout.flow.size(); ++c)
    for (size_t u = 0; u < layout.flow[c].size(); ++u)
      d.alpha[c][u] = row_duals[static_cast<size_t>(layout.flow[c][u])];
  for (size_t u = 0; u < layout.one_to_one.size(); ++u)
    d.phi[u] = row_duals[static_cast<size_t>(layout.one_to_one[u])];
  for (size_t u = 0; u < layout.node_cap.size(); ++u)
    d.beta_node[u] = row_duals[static_cast<size_t>(layout.node_cap[u])];
  for (size_t e = 0; e < layout.edge_cap.size(); ++e)
    d.beta_edge[e] = row_duals[static_cast<size_t>(layout.edge_cap[e])];
  for (size_t c = 0; c < layout.depart_s.size(); ++c)
    for (size_t u = 0; u < layout.depart_s[c].size(); ++u) {
      d.gamma_s[c][u] = row_duals[static_cast<size_t>(layout.depart_s[c][u])];
      d.gamma_t[c][u] = row_duals[static_cast<size_t>(layout.depart_t[c][u])];
    }
  return d;
}

// ---------------------------------------------------------------------------
// Pricing

namespace {

/// Reduced-cost objective coefficients for a part's embedding model.
FFObjectiveOverride pricing_objective(
    const Instance& inst, const PartitionContext& ctx, int part,
    const PartInstance& pi, const DualVector& duals,
    const std::vector<std::vector<std::int64_t>>* node_cost_override) {
  const int ns = inst.substrate_nodes();
  FFObjectiveOverride obj;
  obj.x_cost.assign(pi.vnode_ids.size(),
                    std::vector<double>(static_cast<size_t>(ns), 0.0));
  for (size_t local = 0; local < pi.vnode_ids.size(); ++local) {
    NodeId full = pi.vnode_ids[local];
    double demand = static_cast<double>(inst.node_demand[static_cast<size_t>(full)]);
    for (NodeId u = 0; u < ns; ++u) {
      double w = node_cost_override
                     ? static_cast<double>((*node_cost_override)[local][static_cast<size_t>(u)])
                     : static_cast<double>(inst.node_cost[static_cast<size_t>(u)]);
      double c = demand * w - duals.phi[static_cast<size_t>(u)] -
                 demand * duals.beta_node[static_cast<size_t>(u)];
      for (const auto& inc : inst.vnet.adjacent(full)) {
        int k = ctx.cut_index_of[static_cast<size_t>(inc.edge)];
        if (k < 0) continue;
        bool is_source = inst.vnet.tail(inc.edge) == full;
        if (is_source)
          c -= duals.alpha[static_cast<size_t>(k)][static_cast<size_t>(u)] +
               duals.gamma_s[static_cast<size_t>(k)][static_cast<size_t>(u)];
        else
          c += duals.alpha[static_cast<size_t>(k)][static_cast<size_t>(u)] -
               duals.gamma_t[static_cast<size_t>(k)][static_cast<size_t>(u)];
      }
      obj.x_cost[local][static_cast<size_t>(u)] = c;
    }
  }
  obj.y_cost.assign(pi.vedge_ids.size(),
                    std::vector<double>(static_cast<size_t>(inst.snet.edge_count()), 0.0));
  for (size_t local = 0; local < pi.vedge_ids.size(); ++local) {
    EdgeId full = pi.vedge_ids[local];
    double demand = static_cast<double>(inst.edge_demand[static_cast<size_t>(full)]);
    for (EdgeId es = 0; es < inst.snet.edge_count(); ++es)
      obj.y_cost[local][static_cast<size_t>(es)] =
          demand * (static_cast<double>(inst.edge_cost[static_cast<size_t>(es)]) -
                    duals.beta_edge[static_cast<size_t>(es)]);
  }
  return obj;
}

}  // namespace

PriceResult price_exact(const Instance& inst, const PartitionContext& ctx,
                        int part, const DualVector& duals,
                        const PricingOptions& options) {
  PartInstance pi = make_part_instance(inst, ctx, part);
  FFObjectiveOverride obj =
      pricing_objective(inst, ctx, part, pi, duals, options.node_cost_override);
  FFOptions ff_opt;
  ff_opt.objective_override = &obj;
  ff_opt.fix_subgraph = options.view;
  FFModel ff = build_ff(pi.inst, ff_opt);
  auto out = mip::solve_mip(ff.model, options.time_limit);
  PriceResult res;
  if (out.status == mip::Status::Infeasible) {
    res.reduced_cost = mip::kInf;
    res.proven_optimal = true;  // no feasible sub-mapping on this view
    return res;
  }
  if (out.status != mip::Status::Optimal && out.status != mip::Status::Feasible)
    return res;
  Mapping sub = extract_mapping(pi.inst, ff.handles, out);
  Column col = make_column(inst, ctx, part, pi, sub);
  res.reduced_cost = out.objective - duals.theta[static_cast<size_t>(part)];
  res.proven_optimal = out.status == mip::Status::Optimal;
  if (res.reduced_cost < -mip::kTol || options.keep_nonnegative)
    res.column = std::move(col);
  return res;
}

PriceResult price_greedy(const Instance& inst, const PartitionContext& ctx,
                         int part, const DualVector& duals,
                         const PricingOptions& options) {
  PartInstance pi = make_part_instance(inst, ctx, part);
  FFObjectiveOverride obj =
      pricing_objective(inst, ctx, part, pi, duals, options.node_cost_override);
  GreedyOptions gopt;
  gopt.placement_score = &obj.x_cost;
  gopt.view = options.view;
  // Candidates are ranked by the pricing objective itself. Without a node
  // cost override this ranking equals the reduced-cost ranking (the
  // convexity dual only shifts by a constant); with one it follows the
  // adjusted costs, exactly like the exact pricer's objective.
  auto scorer = [&](const Mapping& m) {
    double value = 0.0;
    for (size_t local = 0; local < pi.vnode_ids.size(); ++local)
      value += obj.x_cost[local][static_cast<size_t>(m.node_place[local])];
    for (size_t local = 0; local < pi.vedge_ids.size(); ++local)
      for (const auto& arc : m.edge_route[local])
        value += obj.y_cost[local][static_cast<size_t>(arc.edge)];
    return value;
  };
  auto best = greedy_multi(pi.inst, options.greedy_restarts, options.seed,
                           scorer, gopt);
  PriceResult res;
  if (!best) return res;
  Column col = make_column(inst, ctx, part, pi, *best);
  res.reduced_cost = reduced_cost_from_master(col, duals);
  if (res.reduced_cost < -mip::kTol || options.keep_nonnegative)
    res.column = std::move(col);
  return res;
}

double lagrangian_bound(double v_rmp, const std::vector<double>& pricer_optima) {
  double bound = v_rmp;
  for (double v : pricer_optima) bound += v;
  return bound;
}

// ---------------------------------------------------------------------------
// Lower-bound engine

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> to_row_duals(const MasterLayout& layout, int row_count,
                                 const DualVector& d) {
  std::vector<double> out(static_cast<size_t>(row_count), 0.0);
  for (size_t i = 0; i < layout.convexity.size(); ++i)
    out[static_cast<size_t>(layout.convexity[i])] = d.theta[i];
  for (size_t c = 0; c < layout.flow.size(); ++c)
    for (size_t u = 0; u < layout.flow[c].size(); ++u)
      out[static_cast<size_t>(layout.flow[c][u])] = d.alpha[c][u];
  for (size_t u = 0; u < layout.one_to_one.size(); ++u)
    out[static_cast<size_t>(layout.one_to_one[u])] = d.phi[u];
  for (size_t u = 0; u < layout.node_cap.size(); ++u)
    out[static_cast<size_t>(layout.node_cap[u])] = d.beta_node[u];
  for (size_t e = 0; e < layout.edge_cap.size(); ++e)
    out[static_cast<size_t>(layout.edge_cap[e])] = d.beta_edge[e];
  for (size_t c = 0; c < layout.depart_s.size(); ++c)
    for (size_t u = 0; u < layout.depart_s[c].size(); ++u) {
      out[static_cast<size_t>(layout.depart_s[c][u])] = d.gamma_s[c][u];
      out[static_cast<size_t>(layout.depart_t[c][u])] = d.gamma_t[c][u];
    }
  return out;
}

/// Valid Lagrangian bound at an arbitrary sign-feasible dual point: the dual
/// objective of the rows plus true per-part pricing optima plus the box
/// contributions of the non-column variables (cut-edge flows, artificials).
/// At the master's own optimal duals this collapses to v_rmp + sum v*.
double lagrangian_bound_at(const Instance& inst, const MasterModel& master,
                           const DualVector& duals, double pricer_sum) {
  const mip::Model& m = master.model;
  std::vector<double> row_duals =
      to_row_duals(master.layout, m.row_count(), duals);
  double bound = pricer_sum;
  for (RowId r = 0; r < m.row_count(); ++r)
    bound += row_duals[static_cast<size_t>(r)] * m.row(r).rhs;
  // rc of every non-lambda variable, via the row data.
  std::vector<double> ydot(static_cast<size_t>(m.var_count()), 0.0);
  for (RowId r = 0; r < m.row_count(); ++r)
    for (auto [j, a] : m.row(r).terms)
      ydot[static_cast<size_t>(j)] += row_duals[static_cast<size_t>(r)] * a;
  std::vector<char> is_lambda(static_cast<size_t>(m.var_count()), 0);
  for (const auto& part_vars : master.layout.lambda)
    for (VarId id : part_vars) is_lambda[static_cast<size_t>(id)] = 1;
  for (VarId j = 0; j < m.var_count(); ++j) {
    if (is_lambda[static_cast<size_t>(j)]) continue;  // covered by the pricers
    double rc = m.var(j).obj - ydot[static_cast<size_t>(j)];
    if (rc < 0) bound += rc * m.var(j).ub;
  }
  (void)inst;
  return bound;
}

std::vector<std::int64_t> column_key(const Column& col) {
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

CgResult run_lower_bound(const Instance& inst, const CgConfig& config) {
  auto t0 = Clock::now();
  CgResult result;

  Partition partition;
  if (config.partition) {
    partition = *config.partition;
  } else {
    int k = config.k_r > 0 ? config.k_r
                           : std::max(1, inst.virtual_nodes() / 10);
    partition = partition_balanced_connected(inst.vnet, k, config.seed);
  }
  PartitionContext ctx = PartitionContext::build(inst, partition);
  result.partition_used = ctx.partition;
  const int k = ctx.parts();

  // Sub-pricer substrate views, generated once: partition the substrate into
  // roughly one part per average virtual part size, then expand each to
  // about three times that size.
  const int avg_part = std::max(1, inst.virtual_nodes() / k);
  const int n_views =
      std::clamp(inst.substrate_nodes() / avg_part, 1, inst.substrate_nodes());
  const int view_target = std::min(inst.substrate_nodes(), 3 * avg_part);
  Partition sub_split = partition_balanced_connected(
      inst.snet, n_views, Rng::derive(config.seed, 0x5eed));
  std::vector<SubgraphView> views =
      expand_substrate_parts(inst.snet, sub_split, view_target);

  std::vector<std::vector<Column>> pool(static_cast<size_t>(k));
  std::set<std::vector<std::int64_t>> seen;
  int pool_size = 0;

  MasterModel master;
  double v_rmp = mip::kInf;
  DualVector duals = DualVector::zeros(inst, ctx);
  auto solve_master = [&]() {
    master = build_master(inst, ctx, pool, false, ArtificialMode::Always);
    auto out = mip::solve_lp(master.model);
    if (out.status != mip::Status::Optimal)
      throw BackendFailure("master LP not optimal: " + mip::to_string(out.status));
    v_rmp = out.objective;
    duals = extract_duals(inst, ctx, master.layout, out.duals);
    return out;
  };

  std::optional<DualVector> smoothed;
  auto accept = [&](const Column& col, double claimed_rc,
                    const DualVector& priced_against) -> bool {
    double recomputed = reduced_cost_from_master(col, priced_against);
    result.max_rc_deviation =
        std::max(result.max_rc_deviation, std::abs(claimed_rc - recomputed));
    double rc_current = reduced_cost_from_master(col, duals);
    if (rc_current >= -mip::kTol) return false;
    if (!seen.insert(column_key(col)).second) return false;
    pool[static_cast<size_t>(col.part)].push_back(col);
    ++pool_size;
    return true;
  };

  int iteration = 0;
  auto log_iteration = [&](const std::string& phase, int added) {
    result.log.push_back({iteration, phase, v_rmp, result.lgb, added, pool_size,
                          seconds_since(t0)});
  };
  auto out_of_time = [&]() { return seconds_since(t0) > config.total_seconds; };

  // Phase 1: greedy sub-pricers warm the pool.
  while (pool_size < config.greedy_phase_columns && !out_of_time() &&
         iteration < config.max_iterations) {
    solve_master();
    smoothed = smoothed ? smooth_duals(*smoothed, duals, config.sigma) : duals;
    int added = 0;
    for (int i = 0; i < k; ++i) {
      PricingOptions opt;
      opt.view = &views[static_cast<size_t>((iteration + i) % static_cast<int>(views.size()))];
      opt.greedy_restarts = config.greedy_restarts;
      opt.seed = Rng::derive(config.seed, 1000003ULL * static_cast<std::uint64_t>(iteration) + static_cast<std::uint64_t>(i));
      auto res = price_greedy(inst, ctx, i, *smoothed, opt);
      if (res.column && accept(*res.column, res.reduced_cost, *smoothed)) ++added;
    }
    log_iteration("greedy", added);
    ++iteration;
    if (added == 0) break;
  }

  // Phase 2: exact sub-pricers until the column cap or the phase budget.
  double phase2_start = seconds_since(t0);
  while (pool_size < config.max_columns && !out_of_time() &&
         seconds_since(t0) - phase2_start < config.exact_sub_phase_seconds &&
         iteration < config.max_iterations) {
    solve_master();
    smoothed = smoothed ? smooth_duals(*smoothed, duals, config.sigma) : duals;
    int added = 0;
    for (int i = 0; i < k; ++i) {
      PricingOptions opt;
      opt.view = &views[static_cast<size_t>((iteration + i) % static_cast<int>(views.size()))];
      opt.time_limit = config.pricer_time_limit;
      auto res = price_exact(inst, ctx, i, *smoothed, opt);
      if (res.column && accept(*res.column, res.reduced_cost, *smoothed)) ++added;
    }
    log_iteration("exact-sub", added);
    ++iteration;
    if (added == 0) break;
  }

  // Phase 3: exact full pricers; every round yields a Lagrangian bound.
  bool part_infeasible = false;
  while (!out_of_time() && iteration < config.max_iterations) {
    solve_master();
    smoothed = smoothed ? smooth_duals(*smoothed, duals, config.sigma) : duals;

    int added = 0;
    bool all_proven = true;
    double sum_opt = 0.0;
    for (int i = 0; i < k && !part_infeasible; ++i) {
      PricingOptions opt;
      opt.time_limit = config.pricer_time_limit;
      auto res = price_exact(inst, ctx, i, *smoothed, opt);
      if (res.reduced_cost >= mip::kInf && res.proven_optimal) {
        part_infeasible = true;
        break;
      }
      all_proven &= res.proven_optimal;
      sum_opt += res.reduced_cost;
      if (res.column && accept(*res.column, res.reduced_cost, *smoothed)) ++added;
    }
    if (part_infeasible) break;
    if (all_proven) {
      double bound = lagrangian_bound_at(inst, master, *smoothed, sum_opt);
      result.lgb = std::max(result.lgb, bound);
      result.lgb_history.push_back(bound);
    }
    log_iteration("exact", added);
    ++iteration;

    if (added == 0) {
      // Certification round with the unsmoothed duals.
      bool proven = true;
      std::vector<double> optima;
      int extra = 0;
      for (int i = 0; i < k; ++i) {
        PricingOptions opt;
        opt.time_limit = config.pricer_time_limit;
        auto res = price_exact(inst, ctx, i, duals, opt);
        if (res.reduced_cost >= mip::kInf && res.proven_optimal) {
          part_infeasible = true;
          break;
        }
        proven &= res.proven_optimal;
        optima.push_back(res.reduced_cost);
        if (res.column && accept(*res.column, res.reduced_cost, duals)) ++extra;
      }
      if (part_infeasible) break;
      if (proven) {
        double bound = lagrangian_bound(v_rmp, optima);
        result.lgb = std::max(result.lgb, bound);
        result.lgb_history.push_back(bound);
      }
      if (extra == 0 && proven) {
        result.converged = true;
        break;
      }
      if (extra == 0 && !proven) break;  // budget-limited pricers, stop
    }
  }

  // Final master state and the artificial-column feasibility verdict.
  auto final_out = solve_master();
  for (int i = 0; i < k; ++i) {
    VarId art = master.layout.artificial[static_cast<size_t>(i)];
    if (art >= 0 && final_out.primal[static_cast<size_t>(art)] > mip::kTol)
      result.infeasible_for_partition = true;
  }
  if (part_infeasible) result.infeasible_for_partition = true;
  if (result.converged && !result.infeasible_for_partition)
    result.lgb = std::max(result.lgb, v_rmp);

  result.v_rmp = v_rmp;
  result.columns_generated = pool_size;
  result.pool = std::move(pool);
  result.gap = (v_rmp - result.lgb) / std::max(1.0, std::abs(v_rmp));
  result.wall_seconds = seconds_since(t0);
  if (!config.log_csv.empty()) write_cg_log_csv(result.log, config.log_csv);
  return result;
}

void write_cg_log_csv(const std::vector<CgIterationLog>& log,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  out << "iteration,phase,v_rmp,lgb,columns_added,pool_size,wall_seconds\n";
  for (const auto& row : log)
    out << row.iteration << "," << row.phase << "," << row.v_rmp << ","
        << row.lgb << "," << row.columns_added << "," << row.pool_size << ","
        << row.wall_seconds << "\n";
}

}  // namespace vne
