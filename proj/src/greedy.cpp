#include "vne/greedy.hpp"

#include <algorithm>
#include <queue>

#include "vne/rng.hpp"

namespace vne {

namespace {

/// Dijkstra from src over allowed nodes/edges, weights = per-unit edge costs.
std::vector<Weight> cost_distances(const Instance& inst, NodeId src,
                                   const std::vector<char>& node_in,
                                   const std::vector<char>& edge_in) {
  const Graph& g = inst.snet;
  std::vector<Weight> dist(static_cast<size_t>(g.node_count()), kUnreachable);
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<size_t>(src)] = 0;
  heap.push({0, src});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[static_cast<size_t>(u)]) continue;
    for (const auto& inc : g.adjacent(u)) {
      if (!edge_in[static_cast<size_t>(inc.edge)]) continue;
      if (!node_in[static_cast<size_t>(inc.neighbor)]) continue;
      Weight nd = d + inst.edge_cost[static_cast<size_t>(inc.edge)];
      if (nd < dist[static_cast<size_t>(inc.neighbor)]) {
        dist[static_cast<size_t>(inc.neighbor)] = nd;
        heap.push({nd, inc.neighbor});
      }
    }
  }
  return dist;
}

void fill_allowed(const Instance& inst, const SubgraphView* view,
                  std::vector<char>& node_in, std::vector<char>& edge_in) {
  if (!view) {
    node_in.assign(static_cast<size_t>(inst.substrate_nodes()), 1);
    edge_in.assign(static_cast<size_t>(inst.snet.edge_count()), 1);
    return;
  }
  node_in.assign(static_cast<size_t>(inst.substrate_nodes()), 0);
  edge_in.assign(static_cast<size_t>(inst.snet.edge_count()), 0);
  for (NodeId u : view->members) node_in[static_cast<size_t>(u)] = 1;
  for (EdgeId e : view->induced_edges) edge_in[static_cast<size_t>(e)] = 1;
}

}  // namespace

std::optional<std::vector<OrientedEdgeRef>> route_cheapest_residual(
    const Instance& inst, const ResidualState& residual, NodeId from, NodeId to,
    std::int64_t demand, const SubgraphView* view) {
  const Graph& g = inst.snet;
  std::vector<char> node_in, edge_in;
  fill_allowed(inst, view, node_in, edge_in);

  std::vector<Weight> dist(static_cast<size_t>(g.node_count()), kUnreachable);
  std::vector<OrientedEdgeRef> arrived_by(static_cast<size_t>(g.node_count()));
  std::vector<NodeId> prev(static_cast<size_t>(g.node_count()), -1);
  using Item = std::pair<Weight, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<size_t>(from)] = 0;
  heap.push({0, from});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[static_cast<size_t>(u)]) continue;
    if (u == to) break;
    for (const auto& inc : g.adjacent(u)) {
      if (!edge_in[static_cast<size_t>(inc.edge)] ||
          !node_in[static_cast<size_t>(inc.neighbor)])
        continue;
      if (residual.edge_remaining[static_cast<size_t>(inc.edge)] < demand) continue;
      Weight nd = d + inst.edge_cost[static_cast<size_t>(inc.edge)];
      if (nd < dist[static_cast<size_t>(inc.neighbor)]) {
        dist[static_cast<size_t>(inc.neighbor)] = nd;
        prev[static_cast<size_t>(inc.neighbor)] = u;
        arrived_by[static_cast<size_t>(inc.neighbor)] = {
            inc.edge, g.tail(inc.edge) != u};
        heap.push({nd, inc.neighbor});
      }
    }
  }
  if (dist[static_cast<size_t>(to)] >= kUnreachable) return std::nullopt;
  std::vector<OrientedEdgeRef> path;
  for (NodeId cur = to; cur != from; cur = prev[static_cast<size_t>(cur)])
    path.push_back(arrived_by[static_cast<size_t>(cur)]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<Mapping> greedy_embed(const Instance& inst, std::uint64_t seed,
                                    const GreedyOptions& options) {
  const int nr = inst.virtual_nodes();
  const Graph& gs = inst.snet;
  Rng rng(seed);
  std::vector<char> node_in, edge_in;
  fill_allowed(inst, options.view, node_in, edge_in);

  std::vector<NodeId> place(static_cast<size_t>(nr), -1);
  std::vector<char> used(static_cast<size_t>(gs.node_count()), 0);
  // Distance map from each placed node's host, filled on placement and
  // reused for every later scoring pass.
  std::vector<std::vector<Weight>> dist_from(static_cast<size_t>(nr));

  auto feasible_host = [&](NodeId v, NodeId u) {
    return node_in[static_cast<size_t>(u)] && !used[static_cast<size_t>(u)] &&
           inst.node_capacity[static_cast<size_t>(u)] >=
               inst.node_demand[static_cast<size_t>(v)];
  };
  auto commit = [&](NodeId v, NodeId u) {
    place[static_cast<size_t>(v)] = u;
    used[static_cast<size_t>(u)] = 1;
    dist_from[static_cast<size_t>(v)] = cost_distances(inst, u, node_in, edge_in);
  };

  // Seed node: uniform virtual node onto a uniform feasible substrate node.
  NodeId first = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(nr)));
  std::vector<NodeId> hosts;
  for (NodeId u = 0; u < gs.node_count(); ++u)
    if (feasible_host(first, u)) hosts.push_back(u);
  if (hosts.empty()) return std::nullopt;
  commit(first, hosts[rng.next_below(hosts.size())]);

  for (int step = 1; step < nr; ++step) {
    std::vector<NodeId> eligible;  // unplaced with a placed neighbor
    for (NodeId v = 0; v < nr; ++v) {
      if (place[static_cast<size_t>(v)] >= 0) continue;
      for (const auto& inc : inst.vnet.adjacent(v))
        if (place[static_cast<size_t>(inc.neighbor)] >= 0) {
          eligible.push_back(v);
          break;
        }
    }
    if (eligible.empty()) return std::nullopt;
    NodeId v = eligible[rng.next_below(eligible.size())];

    NodeId best_u = -1;
    double best_score = 0.0;
    for (NodeId u = 0; u < gs.node_count(); ++u) {
      if (!feasible_host(v, u)) continue;
      double score = 0.0;
      bool reachable = true;
      for (const auto& inc : inst.vnet.adjacent(v)) {
        if (place[static_cast<size_t>(inc.neighbor)] < 0) continue;
        Weight d = dist_from[static_cast<size_t>(inc.neighbor)][static_cast<size_t>(u)];
        if (d >= kUnreachable) {
          reachable = false;
          break;
        }
        score += static_cast<double>(d);
      }
      if (!reachable) continue;
      if (options.placement_score)
        score += (*options.placement_score)[static_cast<size_t>(v)][static_cast<size_t>(u)];
      if (best_u == -1 || score < best_score - 1e-12) {
        best_u = u;
        best_score = score;
      }
    }
    if (best_u == -1) return std::nullopt;
    commit(v, best_u);
  }

  // Successive cheapest paths on residual capacities, decreasing demand,
  // ties by edge id.
  std::vector<EdgeId> order(static_cast<size_t>(inst.vnet.edge_count()));
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) order[static_cast<size_t>(e)] = e;
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return inst.edge_demand[static_cast<size_t>(a)] >
           inst.edge_demand[static_cast<size_t>(b)];
  });
  ResidualState residual = ResidualState::from(inst);
  Mapping m;
  m.node_place = place;
  m.edge_route.assign(static_cast<size_t>(inst.vnet.edge_count()), {});
  for (EdgeId e : order) {
    NodeId from = place[static_cast<size_t>(inst.vnet.tail(e))];
    NodeId to = place[static_cast<size_t>(inst.vnet.head(e))];
    std::int64_t demand = inst.edge_demand[static_cast<size_t>(e)];
    auto path = route_cheapest_residual(inst, residual, from, to, demand,
                                        options.view);
    if (!path) return std::nullopt;
    for (const auto& arc : *path)
      residual.edge_remaining[static_cast<size_t>(arc.edge)] -= demand;
    m.edge_route[static_cast<size_t>(e)] = std::move(*path);
  }
  return m;
}

std::optional<Mapping> greedy_multi(const Instance& inst, int restarts,
                                    std::uint64_t seed,
                                    const MappingScorer& score,
                                    const GreedyOptions& options) {
  std::optional<Mapping> best;
  double best_score = 0.0;
  for (int t = 0; t < restarts; ++t) {
    auto m = greedy_embed(inst, Rng::derive(seed, static_cast<std::uint64_t>(t)),
                          options);
    if (!m) continue;
    double s =
        score ? score(*m) : static_cast<double>(mapping_cost(inst, *m));
    if (!best || s < best_score - 1e-12) {
      best = std::move(m);
      best_score = s;
    }
  }
  return best;
}

}  // namespace vne
