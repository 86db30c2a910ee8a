// Command-line front end: instance generation and import, the four solver
// modes, mapping validation, the exhaustive reference solver, and a small
// benchmark harness emitting CSV reports.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vne/colgen.hpp"
#include "vne/errors.hpp"
#include "vne/flow_form.hpp"
#include "vne/greedy.hpp"
#include "vne/instance.hpp"
#include "vne/oracle.hpp"
#include "vne/pbh.hpp"

namespace {

using namespace vne;

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;

std::string regime_from_name(const std::string& path) {
  for (const char* r : {"large", "medium", "small"})
    if (path.find(r) != std::string::npos) return r;
  return "-";
}

void write_csv_line(std::ofstream& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    out << (i ? "," : "") << cells[i];
  out << "\n";
}

struct SolveArgs {
  std::string instance_path;
  std::string report_path;
  std::string mapping_out;
  std::string partition_path;
  int kr = 0;
  int columns = 0;
  std::string pricer = "greedy";
  double time_limit = 600.0;
  std::uint64_t seed = 0;
  int restarts = 100;
  int threads = 1;
  bool relaxed = false;
};

std::optional<Partition> load_partition_arg(const Instance& inst,
                                            const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_partition(inst.vnet, path);
}

int emit_mapping(const Instance& inst, const Mapping& m, const SolveArgs& args,
                 std::int64_t cost) {
  if (!args.mapping_out.empty()) store_mapping(inst, m, args.mapping_out);
  std::cout << "cost " << cost << "\n";
  return kExitOk;
}

int run_solve_ff(const Instance& inst, const SolveArgs& args) {
  FFOptions opt;
  opt.relaxed = args.relaxed;
  FFModel ff = build_ff(inst, opt);
  if (args.relaxed) {
    auto out = mip::solve_lp(ff.model);
    if (out.status != mip::Status::Optimal) {
      std::cout << "status " << mip::to_string(out.status) << "\n";
      return kExitNoSolution;
    }
    std::cout << "LP " << out.objective << "\n";
    return kExitOk;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto out = mip::solve_mip(ff.model, args.time_limit);
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  std::cout << "status " << mip::to_string(out.status) << "\n";
  if (out.status != mip::Status::Optimal && out.status != mip::Status::Feasible) {
    std::cout << "bound " << out.bound << "\n";
    return kExitNoSolution;
  }
  Mapping m = extract_mapping(inst, ff.handles, out);
  if (!args.report_path.empty()) {
    std::ofstream rep(args.report_path, std::ios::binary);
    rep << "instance,method,value,status,seconds\n";
    write_csv_line(rep, {args.instance_path, "ff",
                         std::to_string(mapping_cost(inst, m)),
                         mip::to_string(out.status), std::to_string(secs)});
  }
  return emit_mapping(inst, m, args, mapping_cost(inst, m));
}

int run_solve_cg(const Instance& inst, const SolveArgs& args) {
  CgConfig cfg;
  cfg.k_r = args.kr;
  cfg.seed = args.seed;
  cfg.partition = load_partition_arg(inst, args.partition_path);
  if (args.columns > 0) cfg.max_columns = args.columns;
  cfg.total_seconds = args.time_limit;
  cfg.greedy_restarts = args.restarts;
  cfg.log_csv = args.report_path;
  CgResult res = run_lower_bound(inst, cfg);
  if (res.infeasible_for_partition) {
    std::cout << "status infeasible-for-partition\n";
    return kExitNoSolution;
  }
  std::cout << "RMP " << res.v_rmp << "\n";
  std::cout << "LGB " << res.lgb << "\n";
  std::cout << "gap " << res.gap << "\n";
  std::cout << "columns " << res.columns_generated << "\n";
  std::cout << (res.converged ? "converged\n" : "budget-exhausted\n");
  return kExitOk;
}

int run_solve_pbh(const Instance& inst, const SolveArgs& args,
                  const std::string& regime) {
  PbhConfig cfg;
  cfg.k_r = args.kr;
  cfg.seed = args.seed;
  if (args.columns > 0) cfg.column_target = args.columns;
  cfg.pricer = args.pricer == "exact" ? PbhPricer::Exact : PbhPricer::Greedy;
  cfg.rmp_time_limit = args.time_limit;
  cfg.greedy_restarts = args.restarts;
  cfg.virtual_partition = load_partition_arg(inst, args.partition_path);
  PbhResult res = solve_pbh(inst, cfg);
  if (!args.report_path.empty()) {
    std::ofstream rep(args.report_path, std::ios::binary);
    rep << "instance,regime,k_r,columns,pricer,cost,status,wall_seconds\n";
    write_csv_line(rep, {args.instance_path, regime,
                         std::to_string(res.report.k_r),
                         std::to_string(res.report.columns), args.pricer,
                         std::to_string(res.report.cost),
                         mip::to_string(res.report.status),
                         std::to_string(res.report.wall_seconds)});
  }
  if (!res.mapping) {
    std::cout << "status " << mip::to_string(res.report.status) << "\n";
    return kExitNoSolution;
  }
  return emit_mapping(inst, *res.mapping, args, res.report.cost);
}

int run_solve_greedy(const Instance& inst, const SolveArgs& args) {
  auto best = greedy_multi(inst, args.restarts, args.seed);
  if (!best) {
    std::cout << "status no_solution\n";
    return kExitNoSolution;
  }
  std::int64_t cost = mapping_cost(inst, *best);
  if (!args.report_path.empty()) {
    std::ofstream rep(args.report_path, std::ios::binary);
    rep << "instance,method,value,status,seconds\n";
    write_csv_line(rep, {args.instance_path, "greedy", std::to_string(cost),
                         "feasible", "0"});
  }
  return emit_mapping(inst, *best, args, cost);
}

int run_bench(const std::string& suite_dir, const std::string& out_path,
              const SolveArgs& args) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(suite_dir))
    if (entry.path().extension() == ".vne") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(out_path + ": cannot write");
  out << "instance,regime,method,bound_or_cost,status,seconds\n";

  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto secs = [](auto a, auto b) {
    return std::chrono::duration<double>(b - a).count();
  };
  for (const auto& file : files) {
    Instance inst = load_instance(file.string());
    std::string regime = regime_from_name(file.filename().string());
    {
      auto t0 = clock();
      auto ff = build_ff(inst);
      auto res = mip::solve_mip(ff.model, args.time_limit);
      bool has = res.status == mip::Status::Optimal ||
                 res.status == mip::Status::Feasible;
      write_csv_line(out, {file.filename().string(), regime, "ff",
                           has ? std::to_string(res.objective)
                               : std::to_string(res.bound),
                           mip::to_string(res.status),
                           std::to_string(secs(t0, clock()))});
    }
    {
      auto t0 = clock();
      CgConfig cfg;
      cfg.k_r = args.kr;
      cfg.seed = args.seed;
      cfg.total_seconds = args.time_limit;
      CgResult res = run_lower_bound(inst, cfg);
      write_csv_line(out, {file.filename().string(), regime, "cg",
                           std::to_string(res.lgb),
                           res.converged ? "converged" : "bound",
                           std::to_string(secs(t0, clock()))});
    }
    {
      auto t0 = clock();
      PbhConfig cfg;
      cfg.k_r = args.kr;
      cfg.seed = args.seed;
      if (args.columns > 0) cfg.column_target = args.columns;
      cfg.pricer = args.pricer == "exact" ? PbhPricer::Exact : PbhPricer::Greedy;
      cfg.rmp_time_limit = args.time_limit;
      PbhResult res = solve_pbh(inst, cfg);
      write_csv_line(out, {file.filename().string(), regime, "pbh",
                           std::to_string(res.report.cost),
                           mip::to_string(res.report.status),
                           std::to_string(secs(t0, clock()))});
    }
    {
      auto t0 = clock();
      auto best = greedy_multi(inst, args.restarts, args.seed);
      write_csv_line(out, {file.filename().string(), regime, "greedy",
                           best ? std::to_string(mapping_cost(inst, *best)) : "-",
                           best ? "feasible" : "no_solution",
                           std::to_string(secs(t0, clock()))});
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual network embedding solver suite"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate an instance on given topologies");
  std::string gen_virtual, gen_substrate, gen_regime = "medium", gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--virtual", gen_virtual, "virtual topology edge list")->required();
  gen->add_option("--substrate", gen_substrate, "substrate topology edge list")->required();
  gen->add_option("--regime", gen_regime, "large|medium|small")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output instance file")->required();

  auto* imp = app.add_subcommand("import", "Convert a topology to an edge list");
  std::string imp_format = "edgelist", imp_in, imp_out;
  imp->add_option("--format", imp_format, "edgelist|graphml")->required();
  imp->add_option("--in", imp_in, "input file")->required();
  imp->add_option("--out", imp_out, "output edge list")->required();

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string method;
  SolveArgs sargs;
  solve->add_option("method", method, "ff|cg|pbh|greedy")->required();
  solve->add_option("--instance", sargs.instance_path, "instance file")->required();
  solve->add_option("--kr", sargs.kr, "number of virtual parts (0 = auto)");
  solve->add_option("--columns", sargs.columns, "column budget");
  solve->add_option("--pricer", sargs.pricer, "greedy|exact");
  solve->add_option("--time-limit", sargs.time_limit, "seconds");
  solve->add_option("--seed", sargs.seed, "random seed");
  solve->add_option("--restarts", sargs.restarts, "greedy restarts");
  solve->add_option("--threads", sargs.threads,
                    "worker cap; results are identical for any value");
  solve->add_option("--partition", sargs.partition_path, "virtual partition file");
  solve->add_option("--report", sargs.report_path, "CSV report path");
  solve->add_option("--mapping-out", sargs.mapping_out, "write the mapping here");
  solve->add_flag("--relaxed", sargs.relaxed, "ff: solve the LP relaxation");

  auto* val = app.add_subcommand("validate", "Check a mapping against an instance");
  std::string val_instance, val_mapping;
  val->add_option("--instance", val_instance)->required();
  val->add_option("--mapping", val_mapping)->required();

  auto* orc = app.add_subcommand("oracle", "Exhaustive optimum for tiny instances");
  std::string orc_instance;
  orc->add_option("--instance", orc_instance)->required();

  auto* bench = app.add_subcommand("bench", "Run every solver over a suite directory");
  std::string bench_suite, bench_out;
  SolveArgs bargs;
  bargs.time_limit = 60.0;
  bench->add_option("--suite", bench_suite, "directory of .vne files")->required();
  bench->add_option("--out", bench_out, "output CSV")->required();
  bench->add_option("--kr", bargs.kr);
  bench->add_option("--columns", bargs.columns);
  bench->add_option("--pricer", bargs.pricer);
  bench->add_option("--time-limit", bargs.time_limit, "per-method seconds");
  bench->add_option("--seed", bargs.seed);
  bench->add_option("--restarts", bargs.restarts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      Graph gv = load_edge_list(gen_virtual);
      Graph gs = load_edge_list(gen_substrate);
      Instance inst = generate(gv, gs, regime_from_string(gen_regime), gen_seed);
      store_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return kExitOk;
    }
    if (*imp) {
      Graph g;
      if (imp_format == "edgelist")
        g = load_edge_list(imp_in);
      else if (imp_format == "graphml")
        g = import_graphml(imp_in);
      else
        throw ParseError("unknown import format '" + imp_format + "'");
      store_edge_list(g, imp_out);
      std::cout << "wrote " << imp_out << " (" << g.node_count() << " nodes, "
                << g.edge_count() << " edges)\n";
      return kExitOk;
    }
    if (*solve) {
      Instance inst = load_instance(sargs.instance_path);
      std::string regime = regime_from_name(sargs.instance_path);
      if (method == "ff") return run_solve_ff(inst, sargs);
      if (method == "cg") return run_solve_cg(inst, sargs);
      if (method == "pbh") return run_solve_pbh(inst, sargs, regime);
      if (method == "greedy") return run_solve_greedy(inst, sargs);
      std::cerr << "unknown method '" << method << "'\n";
      return kExitUsage;
    }
    if (*val) {
      Instance inst = load_instance(val_instance);
      Mapping m = load_mapping(inst, val_mapping);
      auto report = validate(inst, m);
      if (report.ok()) {
        std::cout << "ok cost " << mapping_cost(inst, m) << "\n";
        return kExitOk;
      }
      for (const auto& v : report.violations)
        std::cout << "violation: " << v.detail << "\n";
      return kExitNoSolution;
    }
    if (*orc) {
      Instance inst = load_instance(orc_instance);
      auto res = brute_force_optimum(inst);
      if (!res.feasible) {
        std::cout << "infeasible\n";
        return kExitNoSolution;
      }
      std::cout << "optimum " << res.value << "\n";
      return kExitOk;
    }
    if (*bench) return run_bench(bench_suite, bench_out, bargs);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VirtualLargerThanSubstrate& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoSolution;
  }
  return kExitUsage;
}
