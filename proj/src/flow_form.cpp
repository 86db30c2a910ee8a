#include "vne/flow_form.hpp"

#include <algorithm>
#include <array>

#include "vne/errors.hpp"

namespace vne {

using mip::Model;
using mip::RowId;
using mip::Sense;
using mip::VarId;

FFModel build_ff(const Instance& inst, const FFOptions& options) {
  const int nr = inst.virtual_nodes();
  const int mr = inst.vnet.edge_count();
  const int ns = inst.substrate_nodes();
  const int ms = inst.snet.edge_count();

  std::vector<char> node_allowed(static_cast<size_t>(ns), 1);
  std::vector<char> edge_allowed(static_cast<size_t>(ms), 1);
  if (options.fix_subgraph) {
    node_allowed.assign(static_cast<size_t>(ns), 0);
    edge_allowed.assign(static_cast<size_t>(ms), 0);
    for (NodeId u : options.fix_subgraph->members)
      node_allowed[static_cast<size_t>(u)] = 1;
    for (EdgeId e : options.fix_subgraph->induced_edges)
      edge_allowed[static_cast<size_t>(e)] = 1;
  }

  FFModel ff;
  Model& m = ff.model;
  FFModelHandles& h = ff.handles;
  const bool integer = !options.relaxed;

  h.x.assign(static_cast<size_t>(nr), std::vector<VarId>(static_cast<size_t>(ns), -1));
  for (NodeId v = 0; v < nr; ++v) {
    for (NodeId u = 0; u < ns; ++u) {
      if (!node_allowed[static_cast<size_t>(u)]) continue;
      if (inst.node_capacity[static_cast<size_t>(u)] <
          inst.node_demand[static_cast<size_t>(v)])
        continue;
      double obj =
          options.objective_override
              ? options.objective_override->x_cost[static_cast<size_t>(v)][static_cast<size_t>(u)]
              : static_cast<double>(inst.node_demand[static_cast<size_t>(v)] *
                                    inst.node_cost[static_cast<size_t>(u)]);
      h.x[static_cast<size_t>(v)][static_cast<size_t>(u)] =
          m.add_var(0.0, 1.0, obj, integer, /*branch_priority=*/1);
      ++h.x_count;
    }
  }

  h.y.assign(static_cast<size_t>(mr),
             std::vector<std::array<VarId, 2>>(static_cast<size_t>(ms),
                                               std::array<VarId, 2>{-1, -1}));
  for (EdgeId ev = 0; ev < mr; ++ev) {
    for (EdgeId es = 0; es < ms; ++es) {
      if (!edge_allowed[static_cast<size_t>(es)]) continue;
      if (inst.edge_capacity[static_cast<size_t>(es)] <
          inst.edge_demand[static_cast<size_t>(ev)])
        continue;
      double obj =
          options.objective_override
              ? options.objective_override->y_cost[static_cast<size_t>(ev)][static_cast<size_t>(es)]
              : static_cast<double>(inst.edge_demand[static_cast<size_t>(ev)] *
                                    inst.edge_cost[static_cast<size_t>(es)]);
      for (int dir = 0; dir < 2; ++dir) {
        h.y[static_cast<size_t>(ev)][static_cast<size_t>(es)][static_cast<size_t>(dir)] =
            m.add_var(0.0, 1.0, obj, integer);
        ++h.y_count;
      }
    }
  }

  // Each virtual node placed exactly once.
  h.placement_rows.resize(static_cast<size_t>(nr));
  for (NodeId v = 0; v < nr; ++v) {
    std::vector<std::pair<VarId, double>> terms;
    for (NodeId u = 0; u < ns; ++u)
      if (VarId id = h.x[static_cast<size_t>(v)][static_cast<size_t>(u)]; id >= 0)
        terms.push_back({id, 1.0});
    h.placement_rows[static_cast<size_t>(v)] =
        m.add_row(std::move(terms), Sense::Equal, 1.0);
  }

  // Flow conservation per (virtual edge, substrate node): net outflow equals
  // source indicator minus sink indicator.
  h.flow_rows.assign(static_cast<size_t>(mr),
                     std::vector<RowId>(static_cast<size_t>(ns), -1));
  for (EdgeId ev = 0; ev < mr; ++ev) {
    NodeId vs = inst.vnet.tail(ev);
    NodeId vt = inst.vnet.head(ev);
    for (NodeId u = 0; u < ns; ++u) {
      if (!node_allowed[static_cast<size_t>(u)]) continue;
      std::vector<std::pair<VarId, double>> terms;
      if (VarId id = h.x[static_cast<size_t>(vs)][static_cast<size_t>(u)]; id >= 0)
        terms.push_back({id, 1.0});
      if (VarId id = h.x[static_cast<size_t>(vt)][static_cast<size_t>(u)]; id >= 0)
        terms.push_back({id, -1.0});
      for (const auto& inc : inst.snet.adjacent(u)) {
        const auto& pair = h.y[static_cast<size_t>(ev)][static_cast<size_t>(inc.edge)];
        if (pair[0] < 0) continue;
        int out_dir = inst.snet.tail(inc.edge) == u ? 0 : 1;
        terms.push_back({pair[static_cast<size_t>(out_dir)], -1.0});
        terms.push_back({pair[static_cast<size_t>(1 - out_dir)], 1.0});
      }
      h.flow_rows[static_cast<size_t>(ev)][static_cast<size_t>(u)] =
          m.add_row(std::move(terms), Sense::Equal, 0.0);
    }
  }

  // One-to-one placement and node capacities.
  h.one_to_one_rows.assign(static_cast<size_t>(ns), -1);
  h.node_capacity_rows.assign(static_cast<size_t>(ns), -1);
  for (NodeId u = 0; u < ns; ++u) {
    if (!node_allowed[static_cast<size_t>(u)]) continue;
    std::vector<std::pair<VarId, double>> terms, cap_terms;
    for (NodeId v = 0; v < nr; ++v)
      if (VarId id = h.x[static_cast<size_t>(v)][static_cast<size_t>(u)]; id >= 0) {
        terms.push_back({id, 1.0});
        cap_terms.push_back(
            {id, static_cast<double>(inst.node_demand[static_cast<size_t>(v)])});
      }
    if (terms.empty()) continue;
    h.one_to_one_rows[static_cast<size_t>(u)] =
        m.add_row(std::move(terms), Sense::LessEqual, 1.0);
    h.node_capacity_rows[static_cast<size_t>(u)] = m.add_row(
        std::move(cap_terms), Sense::LessEqual,
        static_cast<double>(inst.node_capacity[static_cast<size_t>(u)]));
  }

  // Edge capacities, both directions against the undirected capacity.
  h.edge_capacity_rows.assign(static_cast<size_t>(ms), -1);
  for (EdgeId es = 0; es < ms; ++es) {
    if (!edge_allowed[static_cast<size_t>(es)]) continue;
    std::vector<std::pair<VarId, double>> terms;
    for (EdgeId ev = 0; ev < mr; ++ev) {
      const auto& pair = h.y[static_cast<size_t>(ev)][static_cast<size_t>(es)];
      if (pair[0] < 0) continue;
      double d = static_cast<double>(inst.edge_demand[static_cast<size_t>(ev)]);
      terms.push_back({pair[0], d});
      terms.push_back({pair[1], d});
    }
    if (terms.empty()) continue;
    h.edge_capacity_rows[static_cast<size_t>(es)] = m.add_row(
        std::move(terms), Sense::LessEqual,
        static_cast<double>(inst.edge_capacity[static_cast<size_t>(es)]));
  }

  // Flow departure inequalities at both endpoints: a placed source needs an
  // outgoing routed arc, a placed target an incoming one.
  if (options.departure_constraints) {
    h.depart_source_rows.assign(static_cast<size_t>(mr),
                                std::vector<RowId>(static_cast<size_t>(ns), -1));
    h.depart_target_rows.assign(static_cast<size_t>(mr),
                                std::vector<RowId>(static_cast<size_t>(ns), -1));
    for (EdgeId ev = 0; ev < mr; ++ev) {
      NodeId vs = inst.vnet.tail(ev);
      NodeId vt = inst.vnet.head(ev);
      for (NodeId u = 0; u < ns; ++u) {
        if (!node_allowed[static_cast<size_t>(u)]) continue;
        auto arcs_row = [&](bool outgoing, VarId x_id) -> RowId {
          if (x_id < 0) return -1;
          std::vector<std::pair<VarId, double>> terms{{x_id, 1.0}};
          for (const auto& inc : inst.snet.adjacent(u)) {
            const auto& pair = h.y[static_cast<size_t>(ev)][static_cast<size_t>(inc.edge)];
            if (pair[0] < 0) continue;
            int out_dir = inst.snet.tail(inc.edge) == u ? 0 : 1;
            int dir = outgoing ? out_dir : 1 - out_dir;
            terms.push_back({pair[static_cast<size_t>(dir)], -1.0});
          }
          return m.add_row(std::move(terms), Sense::LessEqual, 0.0);
        };
        h.depart_source_rows[static_cast<size_t>(ev)][static_cast<size_t>(u)] =
            arcs_row(true, h.x[static_cast<size_t>(vs)][static_cast<size_t>(u)]);
        h.depart_target_rows[static_cast<size_t>(ev)][static_cast<size_t>(u)] =
            arcs_row(false, h.x[static_cast<size_t>(vt)][static_cast<size_t>(u)]);
      }
    }
  }
  return ff;
}

std::vector<OrientedEdgeRef> walk_arc_support(const Graph& g,
                                              std::vector<OrientedEdgeRef> arcs,
                                              NodeId from, NodeId to) {
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.edge, a.reverse) < std::tie(b.edge, b.reverse);
  });
  std::vector<std::vector<std::pair<OrientedEdgeRef, bool>>> out(
      static_cast<size_t>(g.node_count()));
  for (const auto& arc : arcs)
    out[static_cast<size_t>(g.arc_from(arc))].push_back({arc, false});

  std::vector<OrientedEdgeRef> walk;
  NodeId cur = from;
  size_t steps = 0;
  while (cur != to) {
    if (++steps > arcs.size() + 1)
      throw ExtractionFailure("arc support does not reach the target");
    bool advanced = false;
    for (auto& [arc, used] : out[static_cast<size_t>(cur)]) {
      if (used) continue;
      used = true;
      walk.push_back(arc);
      cur = g.arc_to(arc);
      advanced = true;
      break;
    }
    if (!advanced)
      throw ExtractionFailure("arc support stalls before the target");
  }

  // Loop erasure: keep only the first visit of every node.
  std::vector<int> pos(static_cast<size_t>(g.node_count()), -1);
  std::vector<OrientedEdgeRef> path;
  pos[static_cast<size_t>(from)] = 0;
  for (const auto& arc : walk) {
    NodeId nxt = g.arc_to(arc);
    if (pos[static_cast<size_t>(nxt)] >= 0) {
      for (size_t i = static_cast<size_t>(pos[static_cast<size_t>(nxt)]);
           i < path.size(); ++i)
        pos[static_cast<size_t>(g.arc_to(path[i]))] = -1;
      path.resize(static_cast<size_t>(pos[static_cast<size_t>(nxt)]));
      pos[static_cast<size_t>(nxt)] =
          nxt == from ? 0 : static_cast<int>(path.size());
      continue;
    }
    path.push_back(arc);
    pos[static_cast<size_t>(nxt)] = static_cast<int>(path.size());
  }
  return path;
}

Mapping extract_mapping(const Instance& inst, const FFModelHandles& handles,
                        const mip::SolveOutcome& outcome) {
  if (outcome.status != mip::Status::Optimal &&
      outcome.status != mip::Status::Feasible)
    throw ExtractionFailure("no integral solution to extract");
  const int nr = inst.virtual_nodes();
  const int ns = inst.substrate_nodes();
  Mapping m;
  m.node_place.assign(static_cast<size_t>(nr), -1);
  for (NodeId v = 0; v < nr; ++v) {
    for (NodeId u = 0; u < ns; ++u) {
      VarId id = handles.x[static_cast<size_t>(v)][static_cast<size_t>(u)];
      if (id >= 0 && outcome.primal[static_cast<size_t>(id)] > 0.5) {
        m.node_place[static_cast<size_t>(v)] = u;
        break;
      }
    }
    if (m.node_place[static_cast<size_t>(v)] < 0)
      throw ExtractionFailure("virtual node " + std::to_string(v) +
                              " has no placement in the solution");
  }
  m.edge_route.assign(static_cast<size_t>(inst.vnet.edge_count()), {});
  for (EdgeId ev = 0; ev < inst.vnet.edge_count(); ++ev) {
    std::vector<OrientedEdgeRef> arcs;
    for (EdgeId es = 0; es < inst.snet.edge_count(); ++es) {
      const auto& pair = handles.y[static_cast<size_t>(ev)][static_cast<size_t>(es)];
      if (pair[0] < 0) continue;
      if (outcome.primal[static_cast<size_t>(pair[0])] > 0.5)
        arcs.push_back({es, false});
      if (outcome.primal[static_cast<size_t>(pair[1])] > 0.5)
        arcs.push_back({es, true});
    }
    NodeId from = m.node_place[static_cast<size_t>(inst.vnet.tail(ev))];
    NodeId to = m.node_place[static_cast<size_t>(inst.vnet.head(ev))];
    m.edge_route[static_cast<size_t>(ev)] =
        walk_arc_support(inst.snet, std::move(arcs), from, to);
  }
  return m;
}

}  // namespace vne
