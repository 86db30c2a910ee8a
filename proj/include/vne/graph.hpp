#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vne {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using Weight = std::int64_t;

/// Sentinel for unreachable pairs in distance matrices. Kept well below
/// INT64_MAX so sums of a few sentinels cannot overflow.
inline constexpr Weight kUnreachable = (1LL << 60);

/// A reference to one traversal direction of an undirected edge.
/// Forward runs tail(e) -> head(e) in the edge's canonical orientation,
/// Reverse runs head(e) -> tail(e).
struct OrientedEdgeRef {
  EdgeId edge = -1;
  bool reverse = false;

  friend bool operator==(const OrientedEdgeRef&,
                         const OrientedEdgeRef&) = default;
};

/// Simple undirected graph with dense node ids 0..n-1 and stable edge ids
/// 0..m-1. Every edge carries a canonical orientation fixed at construction
/// (the order its endpoints were given); bidirected flow models and path
/// encodings rely on that orientation never changing.
///
/// Immutable after construction, so concurrent read access is safe.
class Graph {
 public:
  struct Edge {
    NodeId a = -1;  // tail in canonical orientation
    NodeId b = -1;  // head in canonical orientation
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  /// An adjacency entry: the incident edge and the neighbor it leads to.
  struct Incidence {
    EdgeId edge;
    NodeId neighbor;
  };

  Graph() = default;

  /// Builds a graph and validates simplicity (no self-loops, no parallel
  /// edges). Connectivity is required unless allow_disconnected is set.
  static Graph build(int node_count, std::span<const std::pair<NodeId, NodeId>> edges,
                     bool allow_disconnected = false);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
  NodeId tail(EdgeId e) const { return edge(e).a; }
  NodeId head(EdgeId e) const { return edge(e).b; }

  NodeId arc_from(OrientedEdgeRef a) const {
    return a.reverse ? head(a.edge) : tail(a.edge);
  }
  NodeId arc_to(OrientedEdgeRef a) const {
    return a.reverse ? tail(a.edge) : head(a.edge);
  }

  const std::vector<Incidence>& adjacent(NodeId u) const {
    return adjacency_[static_cast<size_t>(u)];
  }
  int degree(NodeId u) const {
    return static_cast<int>(adjacent(u).size());
  }

  /// The outgoing arc of an incident edge as seen from u.
  OrientedEdgeRef out_arc(NodeId u, EdgeId e) const {
    return OrientedEdgeRef{e, tail(e) != u};
  }

  bool is_connected() const;

  /// True if the node subset induces a connected subgraph. Empty sets count
  /// as disconnected.
  bool is_connected_subset(std::span<const NodeId> members) const;

  /// Hop distances from src (unit weights), kUnreachable where no path.
  std::vector<Weight> hop_distances(NodeId src) const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Weighted shortest path length between two nodes (Dijkstra, exact integer
/// arithmetic). Weights must be nonnegative, one per edge.
/// Throws Unreachable when no path exists.
Weight shortest_path_len(const Graph& g, NodeId src, NodeId dst,
                         std::span<const Weight> edge_weights);

/// All-pairs shortest path matrix via Floyd-Warshall; unreachable pairs hold
/// kUnreachable.
std::vector<std::vector<Weight>> all_pairs_distances(
    const Graph& g, std::span<const Weight> edge_weights);

/// The candidate minimizing the sum of hop distances to all candidates
/// (closeness centrality restricted to the candidate set). Ties broken by
/// smallest node id. Throws EmptyCandidateSet.
NodeId closeness_center(const Graph& g, std::span<const NodeId> candidates);

}  // namespace vne
