#include "doctest.h"
#include "fixtures.hpp"
#include "vne/errors.hpp"
#include "vne/oracle.hpp"

using namespace vne;

TEST_CASE("oracle on example1") {
  Instance inst = testfx::example1();
  auto result = brute_force_optimum(inst);
  REQUIRE(result.feasible);
  CHECK(result.value == 9);
  CHECK(validate(inst, result.mapping).ok());
  CHECK(mapping_cost(inst, result.mapping) == 9);
}

TEST_CASE("oracle on example2") {
  Instance inst = testfx::example2();
  auto result = brute_force_optimum(inst);
  REQUIRE(result.feasible);
  CHECK(result.value == 10);
  CHECK(validate(inst, result.mapping).ok());
}

TEST_CASE("oracle on a two-node virtual network over a path") {
  Instance inst;
  inst.vnet = testfx::graph_of(2, {{0, 1}});
  inst.snet = testfx::graph_of(3, {{0, 1}, {1, 2}});
  inst.node_demand.assign(2, 1);
  inst.edge_demand.assign(1, 1);
  inst.node_capacity.assign(3, 1);
  inst.edge_capacity.assign(2, 1);
  inst.node_cost.assign(3, 1);
  inst.edge_cost.assign(2, 1);
  auto result = brute_force_optimum(inst);
  REQUIRE(result.feasible);
  CHECK(result.value == 3);  // two unit node costs plus one adjacent hop
  CHECK(result.mapping.edge_route[0].size() == 1);
}

TEST_CASE("oracle guard") {
  Rng rng(3);
  Instance inst;
  inst.vnet = testfx::random_connected_graph(7, 2, rng);
  inst.snet = testfx::random_connected_graph(12, 4, rng);
  inst.node_demand.assign(7, 1);
  inst.edge_demand.assign(static_cast<size_t>(inst.vnet.edge_count()), 1);
  inst.node_capacity.assign(12, 7);
  inst.edge_capacity.assign(static_cast<size_t>(inst.snet.edge_count()), 50);
  inst.node_cost.assign(12, 1);
  inst.edge_cost.assign(static_cast<size_t>(inst.snet.edge_count()), 1);
  CHECK_THROWS_AS(brute_force_optimum(inst), TooLarge);
}

TEST_CASE("oracle detects infeasibility") {
  Instance inst = testfx::example1();
  for (auto& c : inst.node_capacity) c = 0;
  auto result = brute_force_optimum(inst);
  CHECK(!result.feasible);
}
