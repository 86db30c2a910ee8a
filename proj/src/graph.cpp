#include "vne/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "vne/errors.hpp"

namespace vne {

Graph Graph::build(int node_count,
                   std::span<const std::pair<NodeId, NodeId>> edges,
                   bool allow_disconnected) {
  if (node_count < 0) throw Error("graph: negative node count");
  Graph g;
  g.node_count_ = node_count;
  g.adjacency_.assign(static_cast<size_t>(node_count), {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count)
      throw Error("graph: edge endpoint out of range");
    if (a == b) throw Error("graph: self-loop on node " + std::to_string(a));
    auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second)
      throw Error("graph: parallel edge (" + std::to_string(a) + "," +
                  std::to_string(b) + ")");
    EdgeId id = static_cast<EdgeId>(g.edges_.size());
    g.edges_.push_back(Edge{a, b});
    g.adjacency_[static_cast<size_t>(a)].push_back({id, b});
    g.adjacency_[static_cast<size_t>(b)].push_back({id, a});
  }
  if (!allow_disconnected && !g.is_connected())
    throw Error("graph: not connected");
  return g;
}

bool Graph::is_connected() const {
  if (node_count_ == 0) return false;
  auto dist = hop_distances(0);
  return std::none_of(dist.begin(), dist.end(),
                      [](Weight d) { return d >= kUnreachable; });
}

bool Graph::is_connected_subset(std::span<const NodeId> members) const {
  if (members.empty()) return false;
  std::vector<char> in(static_cast<size_t>(node_count_), 0);
  for (NodeId u : members) in[static_cast<size_t>(u)] = 1;
  std::vector<NodeId> stack{members[0]};
  std::vector<char> seen(static_cast<size_t>(node_count_), 0);
  seen[static_cast<size_t>(members[0])] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (const auto& inc : adjacent(u)) {
      size_t v = static_cast<size_t>(inc.neighbor);
      if (in[v] && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return reached == members.size();
}

std::vector<Weight> Graph::hop_distances(NodeId src) const {
  std::vector<Weight> dist(static_cast<size_t>(node_count_), kUnreachable);
  dist[static_cast<size_t>(src)] = 0;
  std::queue<NodeId> q;
  q.push(src);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (const auto& inc : adjacent(u)) {
      if (dist[static_cast<size_t>(inc.neighbor)] >= kUnreachable) {
        dist[static_cast<size_t>(inc.neighbor)] =
            dist[static_cast<size_t>(u)] + 1;
        q.push(inc.neighbor);
      }
    }
  }
  return dist;
}

namespace {

std::vector<Weight> dijkstra(const Graph& g, NodeId src,
                             std::span<const Weight> w) {
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
      Weight nd = d + w[static_cast<size_t>(inc.edge)];
      if (nd < dist[static_cast<size_t>(inc.neighbor)]) {
        dist[static_cast<size_t>(inc.neighbor)] = nd;
        heap.push({nd, inc.neighbor});
      }
    }
  }
  return dist;
}

}  // namespace

Weight shortest_path_len(const Graph& g, NodeId src, NodeId dst,
                         std::span<const Weight> edge_weights) {
  for (Weight w : edge_weights)
    if (w < 0) throw Error("shortest_path_len: negative weight");
  if (src == dst) return 0;
  auto dist = dijkstra(g, src, edge_weights);
  Weight d = dist[static_cast<size_t>(dst)];
  if (d >= kUnreachable)
    throw Unreachable("no path from " + std::to_string(src) + " to " +
                      std::to_string(dst));
  return d;
}

std::vector<std::vector<Weight>> all_pairs_distances(
    const Graph& g, std::span<const Weight> edge_weights) {
  const size_t n = static_cast<size_t>(g.node_count());
  std::vector<std::vector<Weight>> d(n, std::vector<Weight>(n, kUnreachable));
  for (size_t u = 0; u < n; ++u) d[u][u] = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    size_t a = static_cast<size_t>(g.tail(e));
    size_t b = static_cast<size_t>(g.head(e));
    Weight w = edge_weights[static_cast<size_t>(e)];
    d[a][b] = std::min(d[a][b], w);
    d[b][a] = std::min(d[b][a], w);
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) {
      if (d[i][k] >= kUnreachable) continue;
      for (size_t j = 0; j < n; ++j) {
        if (d[k][j] >= kUnreachable) continue;
        Weight via = d[i][k] + d[k][j];
        if (via < d[i][j]) d[i][j] = via;
      }
    }
  return d;
}

NodeId closeness_center(const Graph& g, std::span<const NodeId> candidates) {
  if (candidates.empty())
    throw EmptyCandidateSet("closeness_center: no candidates");
  NodeId best = -1;
  Weight best_sum = kUnreachable;
  std::vector<NodeId> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId c : sorted) {
    auto dist = g.hop_distances(c);
    Weight sum = 0;
    for (NodeId other : sorted) {
      Weight d = dist[static_cast<size_t>(other)];
      if (d >= kUnreachable)
        throw Error("closeness_center: candidates not in one component");
      sum += d;
    }
    if (sum < best_sum) {  // ties fall to the smallest id via sorted order
      best_sum = sum;
      best = c;
    }
  }
  return best;
}

}  // namespace vne
