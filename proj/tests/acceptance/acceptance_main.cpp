// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance and budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "vne/colgen.hpp"
#include "vne/flow_form.hpp"
#include "vne/greedy.hpp"
#include "vne/oracle.hpp"
#include "vne/pbh.hpp"

using namespace vne;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Gate {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
  void require_close(double got, double want, double tol, const std::string& what) {
    if (std::abs(got - want) > tol) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what << " got " << got
             << " want " << want;
    }
  }
};

double g_max_rc_deviation = 0.0;  // accumulated across every CG run (criterion 6)

CgResult converged_cg(const Instance& inst, const Partition& p, std::uint64_t seed) {
  CgConfig cfg;
  cfg.partition = p;
  cfg.seed = seed;
  cfg.greedy_phase_columns = 12;
  cfg.greedy_restarts = 30;
  CgResult res = run_lower_bound(inst, cfg);
  g_max_rc_deviation = std::max(g_max_rc_deviation, res.max_rc_deviation);
  return res;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  Instance inst = testfx::example1();

  FFOptions relaxed;
  relaxed.relaxed = true;
  auto lp = mip::solve_lp(build_ff(inst, relaxed).model);
  gate.require(lp.status == mip::Status::Optimal, "ff lp not optimal");
  gate.require_close(lp.objective, 7.0, 1e-6, "ff lp value");

  CgResult cg = converged_cg(inst, testfx::triangles_partition(), 11);
  gate.require(cg.converged, "cg did not converge");
  gate.require_close(cg.v_rmp, 9.0, 1e-6, "cg value");
  gate.require_close(cg.lgb, 9.0, 1e-6, "cg lagrangian bound");

  FFModel ff = build_ff(inst);
  auto ip = mip::solve_mip(ff.model);
  gate.require(ip.status == mip::Status::Optimal, "ff mip not optimal");
  gate.require_close(ip.objective, 9.0, 1e-6, "ff mip value");
  Mapping m = extract_mapping(inst, ff.handles, ip);
  gate.require(validate(inst, m).ok(), "ff mapping invalid");
  gate.require(mapping_cost(inst, m) == 9, "ff mapping cost");

  PbhConfig pbh;
  pbh.seed = 11;
  PbhResult pres = solve_pbh(inst, pbh);
  gate.require(pres.mapping.has_value(), "pbh found no mapping");
  if (pres.mapping) {
    gate.require(validate(inst, *pres.mapping).ok(), "pbh mapping invalid");
    gate.require(pres.report.cost == 9, "pbh cost");
  }

  auto oracle = brute_force_optimum(inst);
  gate.require(oracle.feasible && oracle.value == 9, "oracle optimum");

  double secs = seconds_since(t0);
  gate.require(secs < 10.0, "over the 10 s budget");
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

bool criterion2(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  Instance inst = testfx::example2();

  auto oracle = brute_force_optimum(inst);
  gate.require(oracle.feasible && oracle.value == 10, "oracle optimum != 10");

  // The four textbook sub-mappings: two cost-4 embeddings per triangle.
  PartitionContext ctx =
      PartitionContext::build(inst, testfx::triangles_partition());
  PartInstance p0 = make_part_instance(inst, ctx, 0);
  PartInstance p1 = make_part_instance(inst, ctx, 1);
  auto sub = [&](const PartInstance& pi, std::vector<NodeId> place,
                 std::vector<std::vector<NodeId>> paths) {
    Mapping m;
    m.node_place = std::move(place);
    for (auto& nodes : paths) m.edge_route.push_back(testfx::route(pi.inst, nodes));
    return m;
  };
  std::vector<std::vector<Column>> pool(2);
  pool[0].push_back(make_column(inst, ctx, 0, p0, sub(p0, {0, 3, 1}, {{0, 3}, {3, 2, 1}, {1, 0}})));
  pool[0].push_back(make_column(inst, ctx, 0, p0, sub(p0, {6, 9, 7}, {{6, 9}, {9, 8, 7}, {7, 6}})));
  pool[1].push_back(make_column(inst, ctx, 1, p1, sub(p1, {3, 6, 4}, {{3, 6}, {6, 5, 4}, {4, 3}})));
  pool[1].push_back(make_column(inst, ctx, 1, p1, sub(p1, {9, 0, 10}, {{9, 0}, {0, 11, 10}, {10, 9}})));
  for (const auto& part : pool)
    for (const Column& c : part)
      gate.require(c.cost == 4, "textbook column cost != 4");

  auto lp = mip::solve_lp(
      build_master(inst, ctx, pool, false, ArtificialMode::None).model);
  gate.require(lp.status == mip::Status::Optimal, "textbook master lp");
  gate.require_close(lp.objective, 10.0, 1e-6, "textbook master lp value");

  auto ip = mip::solve_mip(
      build_master(inst, ctx, pool, true, ArtificialMode::None).model);
  gate.require(ip.status == mip::Status::Infeasible,
               "textbook integer restriction not infeasible");

  PbhConfig pbh;
  pbh.seed = 12;
  PbhResult pres = solve_pbh(inst, pbh);
  gate.require(pres.mapping.has_value(), "pbh found no mapping");
  if (pres.mapping) gate.require(pres.report.cost == 10, "pbh cost != 10");

  double secs = seconds_since(t0);
  gate.require(secs < 10.0, "over the 10 s budget");
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

struct SandwichCase {
  Instance inst;
  std::int64_t optimum;
  Partition partition;
  std::uint64_t seed;
};

std::vector<SandwichCase> g_suite3;  // shared by criteria 3, 4, 5

bool criterion3(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  int ran = 0;
  int lgb_points = 0;
  for (std::uint64_t seed = 1000; ran < 200 && seed < 1600; ++seed) {
    CapacityRegime regime = seed % 3 == 0   ? CapacityRegime::Large
                            : seed % 3 == 1 ? CapacityRegime::Medium
                                            : CapacityRegime::Small;
    Instance inst = testfx::random_small_instance(seed, regime, 2, 5, 10);
    auto oracle = brute_force_optimum(inst);
    if (!oracle.feasible) continue;

    Rng rng(seed * 31 + 7);
    int k = static_cast<int>(rng.next_int(1, inst.virtual_nodes()));
    Partition p = partition_balanced_connected(inst.vnet, k, seed);

    FFOptions relaxed;
    relaxed.relaxed = true;
    auto lp = mip::solve_lp(build_ff(inst, relaxed).model);
    gate.require(lp.status == mip::Status::Optimal, "ff lp failed");

    CgResult cg = converged_cg(inst, p, seed);
    gate.require(cg.converged && !cg.infeasible_for_partition,
                 "cg failed to converge at seed " + std::to_string(seed));
    if (!cg.converged) break;

    double vstar = static_cast<double>(oracle.value);
    gate.require(lp.objective <= cg.v_rmp + 1e-5,
                 "ff lp above cg value at seed " + std::to_string(seed));
    gate.require(cg.v_rmp <= vstar + 1e-5,
                 "cg value above optimum at seed " + std::to_string(seed));
    for (double b : cg.lgb_history) {
      gate.require(b <= vstar + 1e-5,
                   "lagrangian bound above optimum at seed " + std::to_string(seed));
      ++lgb_points;
    }
    g_suite3.push_back({std::move(inst), oracle.value, std::move(p), seed});
    ++ran;
    if (!gate.ok) break;
  }
  gate.require(ran >= 200, "fewer than 200 feasible instances");
  double secs = seconds_since(t0);
  gate.require(secs < 300.0, "over the 5 min budget");
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << ran << " instances, " << lgb_points << " bound points, "
        << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

bool criterion4(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  int ran = 0;
  for (const auto& c : g_suite3) {
    if (ran >= 50) break;
    if (c.inst.virtual_nodes() < 2) continue;
    // Coarse split in two, fine refinement of each part.
    Partition coarse = partition_balanced_connected(c.inst.vnet, 2, c.seed);
    PartitionContext cctx = PartitionContext::build(c.inst, coarse);
    Partition fine;
    fine.part_of.assign(static_cast<size_t>(c.inst.virtual_nodes()), -1);
    int next = 0;
    for (int i = 0; i < cctx.parts(); ++i) {
      const auto& nodes = cctx.part_nodes[static_cast<size_t>(i)];
      std::vector<int> local(static_cast<size_t>(c.inst.virtual_nodes()), -1);
      for (size_t j = 0; j < nodes.size(); ++j)
        local[static_cast<size_t>(nodes[j])] = static_cast<int>(j);
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (EdgeId e : cctx.part_edges[static_cast<size_t>(i)])
        edges.push_back({local[static_cast<size_t>(c.inst.vnet.tail(e))],
                         local[static_cast<size_t>(c.inst.vnet.head(e))]});
      Graph sub = Graph::build(static_cast<int>(nodes.size()), edges);
      Partition sp = partition_balanced_connected(
          sub, nodes.size() >= 2 ? 2 : 1, c.seed + static_cast<std::uint64_t>(i));
      for (size_t j = 0; j < nodes.size(); ++j)
        fine.part_of[static_cast<size_t>(nodes[j])] = next + sp.part_of[j];
      next += sp.k;
    }
    fine.k = next;
    if (!is_refinement(fine, coarse)) continue;

    CgResult coarse_res = converged_cg(c.inst, coarse, c.seed);
    CgResult fine_res = converged_cg(c.inst, fine, c.seed);
    if (coarse_res.infeasible_for_partition || fine_res.infeasible_for_partition)
      continue;
    gate.require(coarse_res.converged && fine_res.converged,
                 "cg not converged at seed " + std::to_string(c.seed));
    gate.require(coarse_res.v_rmp >= fine_res.v_rmp - 1e-5,
                 "refinement monotonicity broken at seed " + std::to_string(c.seed));
    ++ran;
    if (!gate.ok) break;
  }
  gate.require(ran >= 50, "fewer than 50 nested-partition instances");
  double secs = seconds_since(t0);
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << ran << " instances, " << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

bool criterion5(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  int ran = 0;
  for (const auto& c : g_suite3) {
    auto ip = mip::solve_mip(build_ff(c.inst).model);
    gate.require(ip.status == mip::Status::Optimal,
                 "ff mip not optimal at seed " + std::to_string(c.seed));
    gate.require(std::abs(ip.objective - static_cast<double>(c.optimum)) <= 1e-6,
                 "ff mip != oracle at seed " + std::to_string(c.seed));
    ++ran;
    if (!gate.ok) break;
  }
  gate.require(ran >= 200, "suite unavailable");
  double secs = seconds_since(t0);
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << ran << " instances, " << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

bool criterion6(std::string& detail) {
  std::ostringstream extra;
  extra << "(max deviation " << g_max_rc_deviation << ")";
  detail = extra.str();
  return g_max_rc_deviation <= 1e-6;
}

bool criterion7(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  int pbh_feasible = 0, greedy_feasible = 0, both = 0, pbh_not_worse = 0;
  for (int i = 0; i < 20; ++i) {
    std::uint64_t seed = 9000 + static_cast<std::uint64_t>(i);
    Rng rng(seed);
    int nr = static_cast<int>(rng.next_int(20, 30));
    int ns = static_cast<int>(rng.next_int(40, 60));
    Graph gv = testfx::random_connected_graph(nr, static_cast<int>(rng.next_int(nr / 4, nr / 2)), rng);
    Graph gs = testfx::random_connected_graph(ns, static_cast<int>(rng.next_int(ns / 3, (2 * ns) / 3)), rng);
    Instance inst = generate(gv, gs, CapacityRegime::Medium, seed);

    PbhConfig cfg;  // defaults
    cfg.seed = seed;
    PbhResult pres = solve_pbh(inst, cfg);
    bool pbh_ok = pres.mapping.has_value();
    if (pbh_ok) {
      gate.require(validate(inst, *pres.mapping).ok(),
                   "pbh mapping invalid at seed " + std::to_string(seed));
      ++pbh_feasible;
    }

    auto g = greedy_multi(inst, 100, seed);
    bool greedy_ok = g.has_value();
    if (greedy_ok) ++greedy_feasible;

    if (pbh_ok && greedy_ok) {
      ++both;
      std::int64_t gcost = mapping_cost(inst, *g);
      if (pres.report.cost <= gcost) ++pbh_not_worse;
      gate.require(pres.report.cost <= gcost,
                   "pbh cost " + std::to_string(pres.report.cost) + " above greedy " +
                       std::to_string(gcost) + " at seed " + std::to_string(seed));
    }
    if (greedy_ok && !pbh_ok)
      gate.require(false, "greedy succeeded but pbh failed at seed " +
                              std::to_string(seed));
  }
  gate.require(pbh_feasible >= greedy_feasible,
               "pbh solved fewer instances than greedy");
  double secs = seconds_since(t0);
  gate.require(secs < 1800.0, "over the 30 min budget");
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(pbh " << pbh_feasible << "/20, greedy " << greedy_feasible
        << "/20, dominated " << pbh_not_worse << "/" << both << ", " << secs
        << " s)";
  detail = extra.str();
  return gate.ok;
}

bool criterion8(std::string& detail) {
  auto t0 = Clock::now();
  Gate gate;
  int ran = 0;
  for (std::uint64_t seed = 5000; ran < 50 && seed < 5400; ++seed) {
    Rng rng(seed);
    int nr = static_cast<int>(rng.next_int(2, 5));
    int ns = static_cast<int>(rng.next_int(nr + 3, 10));
    Graph gv = testfx::random_connected_graph(nr, static_cast<int>(rng.next_int(0, nr / 2 + 1)), rng);
    Graph gs = testfx::random_connected_graph(ns, static_cast<int>(rng.next_int(1, ns / 2 + 2)), rng);
    Instance small = generate(gv, gs, CapacityRegime::Small, seed);
    auto oracle = brute_force_optimum(small);
    if (!oracle.feasible) continue;

    for (CapacityRegime regime : {CapacityRegime::Medium, CapacityRegime::Large}) {
      Instance larger = generate(gv, gs, regime, seed);
      gate.require(validate(larger, oracle.mapping).ok(),
                   "small-regime optimum invalid under " + to_string(regime) +
                       " at seed " + std::to_string(seed));
      gate.require(mapping_cost(larger, oracle.mapping) == oracle.value,
                   "cost changed across regimes at seed " + std::to_string(seed));
    }
    ++ran;
    if (!gate.ok) break;
  }
  gate.require(ran >= 50, "fewer than 50 feasible small instances");
  double secs = seconds_since(t0);
  std::ostringstream extra;
  extra << gate.detail.str() << (gate.detail.str().empty() ? "" : "; ");
  extra << "(" << ran << " seeds, " << secs << " s)";
  detail = extra.str();
  return gate.ok;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  std::vector<Entry> criteria{
      {"1 worked example A: bounds 7/9, optimal mappings", criterion1},
      {"2 worked example B: fractional 10, intersecting columns", criterion2},
      {"3 bound sandwich on 200 random instances", criterion3},
      {"4 refinement monotonicity on 50 nested partitions", criterion4},
      {"5 flow mip equals exhaustive oracle", criterion5},
      {"6 reduced-cost consistency of every column", criterion6},
      {"7 heuristic dominance at desk scale", criterion7},
      {"8 regime nesting of optimal mappings", criterion8},
  };
  int failures = 0;
  for (auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS " : "FAIL ") << c.name
              << (detail.empty() ? "" : "  " + detail) << std::endl;
    failures += !ok;
  }
  std::cout << (failures ? "ACCEPTANCE: FAILED" : "ACCEPTANCE: OK") << std::endl;
  return failures ? 1 : 0;
}
