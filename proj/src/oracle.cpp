#include "vne/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "vne/errors.hpp"
#include "vne/graph.hpp"

namespace vne {

namespace {

struct Search {
  const Instance& inst;
  std::vector<std::vector<Weight>> dist;  // capacity-blind cost distances
  std::vector<NodeId> vorder;             // virtual nodes, neighbors-first
  std::vector<EdgeId> eorder;             // virtual edges by placement time

  std::vector<NodeId> place;        // per virtual node, -1 while open
  std::vector<char> used;           // substrate node taken
  std::vector<std::int64_t> residual;  // substrate edge residual capacity
  std::vector<std::vector<OrientedEdgeRef>> routes;

  std::int64_t best = -1;
  Mapping best_mapping;

  explicit Search(const Instance& i) : inst(i) {
    dist = all_pairs_distances(inst.snet, inst.edge_cost);
    // Order virtual nodes so each one (after the first) has an earlier
    // neighbor: placement cost bounds tighten as early as possible.
    const int nr = inst.virtual_nodes();
    std::vector<char> seen(static_cast<size_t>(nr), 0);
    vorder.push_back(0);
    seen[0] = 1;
    for (size_t i = 0; i < vorder.size(); ++i)
      for (const auto& inc : inst.vnet.adjacent(vorder[i]))
        if (!seen[static_cast<size_t>(inc.neighbor)]) {
          seen[static_cast<size_t>(inc.neighbor)] = 1;
          vorder.push_back(inc.neighbor);
        }
    for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) eorder.push_back(e);
    place.assign(static_cast<size_t>(nr), -1);
    used.assign(static_cast<size_t>(inst.substrate_nodes()), 0);
    residual = inst.edge_capacity;
    routes.assign(static_cast<size_t>(inst.vnet.edge_count()), {});
  }

  /// Lower bound on total routing cost of the still-unrouted edges given the
  /// current (partial) placement: capacity-blind shortest paths, zero when an
  /// endpoint is unplaced.
  std::int64_t routing_bound(size_t from_edge) const {
    std::int64_t sum = 0;
    for (size_t i = from_edge; i < eorder.size(); ++i) {
      EdgeId e = eorder[i];
      NodeId a = place[static_cast<size_t>(inst.vnet.tail(e))];
      NodeId b = place[static_cast<size_t>(inst.vnet.head(e))];
      if (a < 0 || b < 0) continue;
      Weight d = dist[static_cast<size_t>(a)][static_cast<size_t>(b)];
      if (d >= kUnreachable) return kUnreachable;
      sum += inst.edge_demand[static_cast<size_t>(e)] * d;
    }
    return sum;
  }

  void try_routes(size_t edge_idx, std::int64_t cost) {
    if (best >= 0 && cost + routing_bound(edge_idx) >= best) return;
    if (edge_idx == eorder.size()) {
      best = cost;
      best_mapping.node_place = place;
      best_mapping.edge_route = routes;
      return;
    }
    EdgeId e = eorder[edge_idx];
    NodeId from = place[static_cast<size_t>(inst.vnet.tail(e))];
    NodeId to = place[static_cast<size_t>(inst.vnet.head(e))];
    std::int64_t demand = inst.edge_demand[static_cast<size_t>(e)];

    // Depth-first enumeration of loop-free paths with enough residual.
    std::vector<char> visited(static_cast<size_t>(inst.substrate_nodes()), 0);
    std::vector<OrientedEdgeRef> path;
    auto dfs = [&](auto&& self, NodeId cur, std::int64_t path_cost) -> void {
      if (cur == to) {
        routes[static_cast<size_t>(e)] = path;
        try_routes(edge_idx + 1, cost + path_cost);
        routes[static_cast<size_t>(e)].clear();
        return;
      }
      if (best >= 0 &&
          cost + path_cost +
                  demand * dist[static_cast<size_t>(cur)][static_cast<size_t>(to)] +
                  routing_bound(edge_idx + 1) >=
              best)
        return;
      for (const auto& inc : inst.snet.adjacent(cur)) {
        if (visited[static_cast<size_t>(inc.neighbor)]) continue;
        if (residual[static_cast<size_t>(inc.edge)] < demand) continue;
        visited[static_cast<size_t>(inc.neighbor)] = 1;
        residual[static_cast<size_t>(inc.edge)] -= demand;
        path.push_back({inc.edge, inst.snet.tail(inc.edge) != cur});
        self(self, inc.neighbor,
             path_cost + demand * inst.edge_cost[static_cast<size_t>(inc.edge)]);
        path.pop_back();
        residual[static_cast<size_t>(inc.edge)] += demand;
        visited[static_cast<size_t>(inc.neighbor)] = 0;
      }
    };
    visited[static_cast<size_t>(from)] = 1;
    dfs(dfs, from, 0);
  }

  void try_placements(size_t order_idx, std::int64_t node_cost) {
    if (order_idx == vorder.size()) {
      try_routes(0, node_cost);
      return;
    }
    if (best >= 0 && node_cost + routing_bound(0) >= best) return;
    NodeId v = vorder[order_idx];
    for (NodeId u = 0; u < inst.substrate_nodes(); ++u) {
      if (used[static_cast<size_t>(u)]) continue;
      if (inst.node_capacity[static_cast<size_t>(u)] <
          inst.node_demand[static_cast<size_t>(v)])
        continue;
      // Partial placement bound: placed-neighbor distances must stay finite.
      std::int64_t extra =
          inst.node_demand[static_cast<size_t>(v)] *
          inst.node_cost[static_cast<size_t>(u)];
      place[static_cast<size_t>(v)] = u;
      used[static_cast<size_t>(u)] = 1;
      try_placements(order_idx + 1, node_cost + extra);
      used[static_cast<size_t>(u)] = 0;
      place[static_cast<size_t>(v)] = -1;
    }
  }
};

}  // namespace

OracleResult brute_force_optimum(const Instance& inst) {
  if (inst.virtual_nodes() > 6 || inst.substrate_nodes() > 12)
    throw TooLarge("brute_force_optimum guard: n_r <= 6 and n_s <= 12");
  inst.check();
  Search search(inst);
  search.try_placements(0, 0);
  OracleResult result;
  if (search.best >= 0) {
    result.feasible = true;
    result.value = search.best;
    result.mapping = std::move(search.best_mapping);
  }
  return result;
}

}  // namespace vne
