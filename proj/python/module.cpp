// Python bindings for the embedding solver suite: instance handling, the
// flow model, the lower-bound engine, the Price-and-Branch heuristic, the
// greedy baseline and the exhaustive reference solver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vne/colgen.hpp"
#include "vne/errors.hpp"
#include "vne/flow_form.hpp"
#include "vne/greedy.hpp"
#include "vne/instance.hpp"
#include "vne/oracle.hpp"
#include "vne/partition.hpp"
#include "vne/pbh.hpp"

namespace py = pybind11;
using namespace vne;

namespace {

Graph graph_from_edges(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::pair<NodeId, NodeId>> e(edges.begin(), edges.end());
  return Graph::build(nodes, e);
}

Instance make_instance(const Graph& vnet, const Graph& snet,
                       std::vector<std::int64_t> node_demand,
                       std::vector<std::int64_t> edge_demand,
                       std::vector<std::int64_t> node_capacity,
                       std::vector<std::int64_t> edge_capacity,
                       std::vector<std::int64_t> node_cost,
                       std::vector<std::int64_t> edge_cost) {
  Instance inst;
  inst.vnet = vnet;
  inst.snet = snet;
  inst.node_demand = std::move(node_demand);
  inst.edge_demand = std::move(edge_demand);
  inst.node_capacity = std::move(node_capacity);
  inst.edge_capacity = std::move(edge_capacity);
  inst.node_cost = std::move(node_cost);
  inst.edge_cost = std::move(edge_cost);
  inst.check();
  return inst;
}

py::dict mapping_to_dict(const Instance& inst, const Mapping& m) {
  py::dict d;
  d["placements"] = m.node_place;
  py::list routes;
  for (EdgeId e = 0; e < inst.vnet.edge_count(); ++e) {
    py::list seq;
    const auto& route = m.edge_route[static_cast<size_t>(e)];
    if (!route.empty()) {
      seq.append(inst.snet.arc_from(route.front()));
      for (const auto& arc : route) seq.append(inst.snet.arc_to(arc));
    }
    routes.append(seq);
  }
  d["routes"] = routes;
  d["cost"] = mapping_cost(inst, m);
  return d;
}

}  // namespace

PYBIND11_MODULE(pyvne, m) {
  m.doc() = "Virtual network embedding solvers (flow model, column "
            "generation lower bounds, Price-and-Branch heuristic)";

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_edges), py::arg("nodes"), py::arg("edges"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count);

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("virtual_graph"),
           py::arg("substrate_graph"), py::arg("node_demand"),
           py::arg("edge_demand"), py::arg("node_capacity"),
           py::arg("edge_capacity"), py::arg("node_cost"), py::arg("edge_cost"))
      .def_property_readonly("virtual_nodes", &Instance::virtual_nodes)
      .def_property_readonly("substrate_nodes", &Instance::substrate_nodes)
      .def("store", &store_instance, py::arg("path"))
      .def_static("load", &load_instance, py::arg("path"))
      .def_static(
          "generate",
          [](const Graph& gv, const Graph& gs, const std::string& regime,
             std::uint64_t seed) {
            return generate(gv, gs, regime_from_string(regime), seed);
          },
          py::arg("virtual_graph"), py::arg("substrate_graph"),
          py::arg("regime"), py::arg("seed"));

  m.def(
      "flow_value",
      [](const Instance& inst, bool relaxed, double time_limit) -> py::object {
        FFOptions opt;
        opt.relaxed = relaxed;
        FFModel ff = build_ff(inst, opt);
        auto out = relaxed ? mip::solve_lp(ff.model)
                           : mip::solve_mip(ff.model, time_limit);
        if (out.status != mip::Status::Optimal &&
            out.status != mip::Status::Feasible)
          return py::none();
        return py::float_(out.objective);
      },
      py::arg("instance"), py::arg("relaxed") = false,
      py::arg("time_limit") = 600.0,
      "Flow-model optimum (or its LP relaxation value); None when "
      "infeasible.");

  m.def(
      "lower_bound",
      [](const Instance& inst, int k_r, std::uint64_t seed,
         double time_limit) {
        CgConfig cfg;
        cfg.k_r = k_r;
        cfg.seed = seed;
        cfg.total_seconds = time_limit;
        CgResult res = run_lower_bound(inst, cfg);
        py::dict d;
        d["lgb"] = res.lgb;
        d["rmp"] = res.v_rmp;
        d["gap"] = res.gap;
        d["converged"] = res.converged;
        d["columns"] = res.columns_generated;
        d["infeasible_for_partition"] = res.infeasible_for_partition;
        return d;
      },
      py::arg("instance"), py::arg("k_r") = 0, py::arg("seed") = 0,
      py::arg("time_limit") = 3600.0,
      "Column-generation Lagrangian lower bound.");

  m.def(
      "price_and_branch",
      [](const Instance& inst, int k_r, int columns, const std::string& pricer,
         std::uint64_t seed, double time_limit) -> py::object {
        PbhConfig cfg;
        cfg.k_r = k_r;
        if (columns > 0) cfg.column_target = columns;
        cfg.pricer = pricer == "exact" ? PbhPricer::Exact : PbhPricer::Greedy;
        cfg.seed = seed;
        cfg.rmp_time_limit = time_limit;
        PbhResult res = solve_pbh(inst, cfg);
        if (!res.mapping) return py::none();
        return mapping_to_dict(inst, *res.mapping);
      },
      py::arg("instance"), py::arg("k_r") = 0, py::arg("columns") = 0,
      py::arg("pricer") = "greedy", py::arg("seed") = 0,
      py::arg("time_limit") = 600.0,
      "Price-and-Branch heuristic; a mapping dict or None.");

  m.def(
      "greedy",
      [](const Instance& inst, int restarts, std::uint64_t seed) -> py::object {
        auto best = greedy_multi(inst, restarts, seed);
        if (!best) return py::none();
        return mapping_to_dict(inst, *best);
      },
      py::arg("instance"), py::arg("restarts") = 100, py::arg("seed") = 0,
      "Best-of-restarts randomized greedy embedding.");

  m.def(
      "oracle",
      [](const Instance& inst) -> py::object {
        auto res = brute_force_optimum(inst);
        if (!res.feasible) return py::none();
        return mapping_to_dict(inst, res.mapping);
      },
      py::arg("instance"),
      "Exhaustive optimum for tiny instances (n_r <= 6, n_s <= 12).");

  py::register_exception<Error>(m, "VneError");
}
