#pragma once

// Shared instance fixtures for the unit and acceptance suites: the two
// worked examples (two triangles on two bridged squares; two linked
// triangles on a four-petal substrate), the small mapping illustration,
// and seeded random generators for property suites.

#include <utility>
#include <vector>

#include "vne/errors.hpp"
#include "vne/graph.hpp"
#include "vne/instance.hpp"
#include "vne/partition.hpp"
#include "vne/rng.hpp"

namespace vne::testfx {

inline Graph graph_of(int n, std::vector<std::pair<NodeId, NodeId>> edges) {
  return Graph::build(n, edges);
}

/// 6-node virtual network (two triangles joined by one edge) on an 8-node
/// substrate (two 4-cycles joined by one edge). Unit demands and capacities,
/// zero node costs, unit edge costs. Optimum embeds one triangle per square
/// at cost 4 each plus the bridging hop: 9 total.
inline Instance example1() {
  Instance inst;
  inst.vnet = graph_of(6, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 5}, {5, 3}});
  inst.snet = graph_of(8, {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                           {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}});
  inst.node_demand.assign(6, 1);
  inst.edge_demand.assign(7, 1);
  inst.node_capacity.assign(8, 1);
  inst.edge_capacity.assign(9, 1);
  inst.node_cost.assign(8, 0);
  inst.edge_cost.assign(9, 1);
  inst.check();
  return inst;
}

/// The two-triangle virtual partition of example1/example2.
inline Partition triangles_partition() {
  Partition p;
  p.k = 2;
  p.part_of = {0, 0, 0, 1, 1, 1};
  return p;
}

/// 6-node virtual network (two triangles joined by two edges) on the 12-node
/// substrate made of a central 4-cycle with four attached petals. Unit
/// demands/capacities, zero node costs, unit edge costs; optimum 10.
inline Instance example2() {
  Instance inst;
  inst.vnet = graph_of(
      6, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 4}, {3, 4}, {4, 5}, {5, 3}});
  inst.snet = graph_of(12, {{0, 3}, {3, 6}, {6, 9}, {9, 0},     // central square
                            {0, 11}, {11, 10}, {10, 9},         // left petal
                            {0, 1}, {1, 2}, {2, 3},             // top petal
                            {3, 4}, {4, 5}, {5, 6},             // right petal
                            {6, 7}, {7, 8}, {8, 9}});           // bottom petal
  inst.node_demand.assign(6, 1);
  inst.edge_demand.assign(8, 1);
  inst.node_capacity.assign(12, 1);
  inst.edge_capacity.assign(16, 1);
  inst.node_cost.assign(12, 0);
  inst.edge_cost.assign(16, 1);
  inst.check();
  return inst;
}

/// Small mapping illustration: 4-node virtual network embedded on a 5-node
/// substrate with room to spare.
inline Instance fig1_instance() {
  Instance inst;
  inst.vnet = graph_of(4, {{0, 1}, {0, 3}, {1, 3}, {0, 2}, {2, 3}});
  inst.snet = graph_of(5, {{0, 1}, {0, 2}, {1, 3}, {1, 2}, {2, 3}, {3, 4}, {2, 4}});
  inst.node_demand.assign(4, 1);
  inst.edge_demand.assign(5, 1);
  inst.node_capacity.assign(5, 5);
  inst.edge_capacity.assign(7, 5);
  inst.node_cost.assign(5, 1);
  inst.edge_cost.assign(7, 1);
  inst.check();
  return inst;
}

/// Builds a route from a substrate node sequence.
inline std::vector<OrientedEdgeRef> route(const Instance& inst,
                                          const std::vector<NodeId>& nodes) {
  std::vector<OrientedEdgeRef> refs;
  for (size_t i = 1; i < nodes.size(); ++i) {
    bool found = false;
    for (EdgeId e = 0; e < inst.snet.edge_count() && !found; ++e) {
      if (inst.snet.tail(e) == nodes[i - 1] && inst.snet.head(e) == nodes[i]) {
        refs.push_back({e, false});
        found = true;
      } else if (inst.snet.head(e) == nodes[i - 1] &&
                 inst.snet.tail(e) == nodes[i]) {
        refs.push_back({e, true});
        found = true;
      }
    }
    if (!found) throw Error("fixture route: missing substrate edge");
  }
  return refs;
}

/// The mapping drawn in the illustration figure.
inline Mapping fig1_mapping(const Instance& inst) {
  Mapping m;
  m.node_place = {0, 1, 4, 3};
  m.edge_route = {route(inst, {0, 2, 1}), route(inst, {0, 1, 3}),
                  route(inst, {1, 3}), route(inst, {0, 2, 4}),
                  route(inst, {4, 3})};
  return m;
}

/// A cost-9 optimal mapping of example1: triangles on their squares, cut edge
/// over the bridge.
inline Mapping example1_optimal(const Instance& inst) {
  Mapping m;
  m.node_place = {0, 1, 2, 4, 5, 6};
  m.edge_route = {route(inst, {0, 1}), route(inst, {1, 2}),
                  route(inst, {2, 3, 0}), route(inst, {0, 4}),
                  route(inst, {4, 5}), route(inst, {5, 6}),
                  route(inst, {6, 7, 4})};
  return m;
}

/// Random connected simple graph: spanning tree plus `extra` random chords.
inline Graph random_connected_graph(int n, int extra, Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::vector<char>> present(
      static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (NodeId v = 1; v < n; ++v) {
    NodeId u = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(v)));
    edges.push_back({u, v});
    present[static_cast<size_t>(u)][static_cast<size_t>(v)] = 1;
    present[static_cast<size_t>(v)][static_cast<size_t>(u)] = 1;
  }
  for (int i = 0; i < extra && n >= 3; ++i) {
    NodeId a = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
    NodeId b = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (a == b || present[static_cast<size_t>(a)][static_cast<size_t>(b)]) continue;
    edges.push_back({a, b});
    present[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
    present[static_cast<size_t>(b)][static_cast<size_t>(a)] = 1;
  }
  return Graph::build(n, edges);
}

/// Seeded random instance for the small property suites.
inline Instance random_small_instance(std::uint64_t seed, CapacityRegime regime,
                                      int min_nr = 2, int max_nr = 5,
                                      int max_ns = 10) {
  Rng rng(seed);
  int nr = static_cast<int>(rng.next_int(min_nr, max_nr));
  int ns = static_cast<int>(rng.next_int(std::min(nr + 3, max_ns), max_ns));
  Graph gv = random_connected_graph(nr, static_cast<int>(rng.next_int(0, nr / 2 + 1)), rng);
  Graph gs = random_connected_graph(ns, static_cast<int>(rng.next_int(1, ns / 2 + 2)), rng);
  return generate(gv, gs, regime, rng.next_u64());
}

}  // namespace vne::testfx
