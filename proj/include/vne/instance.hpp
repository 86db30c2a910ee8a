#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vne/graph.hpp"

namespace vne {

/// Capacity generation regimes. Every mapping feasible under Small is
/// feasible under Medium, and Medium-feasible implies Large-feasible;
/// generate() enforces the nesting per element.
enum class CapacityRegime { Large, Medium, Small };

std::string to_string(CapacityRegime r);
CapacityRegime regime_from_string(const std::string& s);

/// An offline VNE instance: virtual network with integer demands, substrate
/// network with integer capacities and per-unit utilization costs.
/// Immutable in practice; all solver entry points take it by const reference.
struct Instance {
  Graph vnet;
  Graph snet;
  std::vector<std::int64_t> node_demand;    // per virtual node, >= 1
  std::vector<std::int64_t> edge_demand;    // per virtual edge, >= 1
  std::vector<std::int64_t> node_capacity;  // per substrate node, >= 0
  std::vector<std::int64_t> edge_capacity;  // per substrate edge, >= 0
  std::vector<std::int64_t> node_cost;      // per substrate node, >= 0
  std::vector<std::int64_t> edge_cost;      // per substrate edge, >= 0

  int virtual_nodes() const { return vnet.node_count(); }
  int substrate_nodes() const { return snet.node_count(); }

  /// Checks field shapes, demand/capacity/cost sign constraints and that the
  /// substrate has enough positive-capacity nodes for a one-to-one placement.
  /// Throws on violation.
  void check() const;

  friend bool operator==(const Instance&, const Instance&);
};

/// A candidate embedding: injective node placement plus one loop-free
/// substrate path per virtual edge, stored as oriented edge refs in
/// traversal order.
struct Mapping {
  std::vector<NodeId> node_place;                        // per virtual node
  std::vector<std::vector<OrientedEdgeRef>> edge_route;  // per virtual edge

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct Violation {
  enum class Kind {
    Shape,          // wrong vector sizes / ids out of range
    Injectivity,    // two virtual nodes share a substrate node
    RouteEndpoint,  // path does not connect the placed endpoints
    RouteBroken,    // arcs not contiguous
    RouteLoop,      // path revisits a node
    NodeCapacity,
    EdgeCapacity,
  };
  Kind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Total mapping cost: sum of demand-weighted placement costs plus
/// demand-weighted routing costs over every traversed substrate edge.
/// Requires a structurally valid mapping (throws StructurallyInvalidMapping),
/// but does not look at capacities.
std::int64_t mapping_cost(const Instance& inst, const Mapping& m);

/// Full feasibility check: structure, injectivity, loop-freeness and both
/// capacity families. Both traversal directions of a substrate edge count
/// against the same undirected capacity. Never throws; problems are listed
/// in the report.
ValidationReport validate(const Instance& inst, const Mapping& m);

/// Generates an instance on the given topologies: unit demands, capacities
/// by regime, degree-based load-balancing costs. Deterministic per seed, and
/// the three regimes generated from one seed nest (Small <= Medium <= Large
/// per node and edge). Throws VirtualLargerThanSubstrate when the virtual
/// network has more nodes than the substrate.
Instance generate(const Graph& topology_virtual, const Graph& topology_substrate,
                  CapacityRegime regime, std::uint64_t seed);

/// Line-oriented text format, LF endings; see README for the grammar.
/// store(load(path)) is byte-identical for canonical files and
/// load(store(inst)) == inst always.
Instance load_instance(const std::string& path);
void store_instance(const Instance& inst, const std::string& path);
Instance read_instance(std::istream& in, const std::string& origin);
void write_instance(const Instance& inst, std::ostream& out);

/// Mapping files: PLACE lines then ROUTE lines (node sequences).
Mapping load_mapping(const Instance& inst, const std::string& path);
void store_mapping(const Instance& inst, const Mapping& m,
                   const std::string& path);

/// Plain edge-list topology files: `a b` per line, `#` comments.
Graph load_edge_list(const std::string& path);
void store_edge_list(const Graph& g, const std::string& path);

/// Extracts an edge list from a GraphML-style XML file (node/edge elements),
/// keeps the largest connected component, and renumbers nodes densely.
Graph import_graphml(const std::string& path);

}  // namespace vne
