#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "vne/instance.hpp"

using namespace vne;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "vne_cli_out.txt";
  std::string cmd = std::string(VNE_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(rc), buf.str()};
}

fs::path tmp(const std::string& name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("cli: ff relaxation and cg bound on the first example") {
  Instance inst = testfx::example1();
  auto file = tmp("cli_example1.vne");
  store_instance(inst, file.string());

  auto lp = run_cli("solve ff --relaxed --instance " + file.string());
  CHECK(lp.exit_code == 0);
  CHECK(lp.output.find("LP 7") != std::string::npos);

  auto cg = run_cli("solve cg --kr 2 --seed 1 --instance " + file.string());
  CHECK(cg.exit_code == 0);
  CHECK(cg.output.find("LGB 9") != std::string::npos);

  auto orc = run_cli("oracle --instance " + file.string());
  CHECK(orc.exit_code == 0);
  CHECK(orc.output.find("optimum 9") != std::string::npos);
  fs::remove(file);
}

TEST_CASE("cli: solve writes a mapping that validates at the reported cost") {
  Instance inst = testfx::example1();
  auto file = tmp("cli_example1b.vne");
  auto map_file = tmp("cli_example1b.map");
  store_instance(inst, file.string());

  auto solve = run_cli("solve pbh --seed 3 --columns 30 --instance " +
                       file.string() + " --mapping-out " + map_file.string());
  CHECK(solve.exit_code == 0);
  CHECK(solve.output.find("cost 9") != std::string::npos);

  auto val = run_cli("validate --instance " + file.string() + " --mapping " +
                     map_file.string());
  CHECK(val.exit_code == 0);
  CHECK(val.output.find("ok cost 9") != std::string::npos);

  // Tamper: duplicate a placement.
  {
    std::ifstream in(map_file);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto pos = text.find("PLACE 1 ");
    REQUIRE(pos != std::string::npos);
    auto eol = text.find('\n', pos);
    std::string line0 = text.substr(0, text.find('\n'));  // PLACE 0 <u>
    text.replace(pos, eol - pos, "PLACE 1 " + line0.substr(line0.rfind(' ') + 1));
    std::ofstream out(map_file, std::ios::binary);
    out << text;
  }
  auto bad = run_cli("validate --instance " + file.string() + " --mapping " +
                     map_file.string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("violation") != std::string::npos);
  fs::remove(file);
  fs::remove(map_file);
}

TEST_CASE("cli: gen is deterministic and import reduces graphml") {
  Instance inst = testfx::example1();
  auto vfile = tmp("cli_virtual.edges");
  auto sfile = tmp("cli_substrate.edges");
  store_edge_list(inst.vnet, vfile.string());
  store_edge_list(inst.snet, sfile.string());

  auto out1 = tmp("cli_gen1.vne");
  auto out2 = tmp("cli_gen2.vne");
  std::string base = "gen --virtual " + vfile.string() + " --substrate " +
                     sfile.string() + " --regime small --seed 9 --out ";
  CHECK(run_cli(base + out1.string()).exit_code == 0);
  CHECK(run_cli(base + out2.string()).exit_code == 0);
  std::ifstream a(out1), b(out2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK_NOTHROW(load_instance(out1.string()));

  auto gml = tmp("cli_topo.graphml");
  {
    std::ofstream out(gml);
    out << "<graphml><node id=\"x\"/><node id=\"y\"/>"
        << "<edge source=\"x\" target=\"y\"/></graphml>\n";
  }
  auto elist = tmp("cli_topo.edges");
  auto imp = run_cli("import --format graphml --in " + gml.string() +
                     " --out " + elist.string());
  CHECK(imp.exit_code == 0);
  Graph g = load_edge_list(elist.string());
  CHECK(g.node_count() == 2);
  for (auto p : {vfile, sfile, out1, out2, gml, elist}) fs::remove(p);
}

TEST_CASE("cli: usage and parse errors exit with code 2") {
  CHECK(run_cli("solve ff").exit_code == 2);  // missing --instance
  CHECK(run_cli("frobnicate").exit_code == 2);
  auto bad_file = tmp("cli_broken.vne");
  {
    std::ofstream out(bad_file);
    out << "VNE 1\nVNODES 1\n0 oops\n";
  }
  auto res = run_cli("solve ff --instance " + bad_file.string());
  CHECK(res.exit_code == 2);
  fs::remove(bad_file);
}

TEST_CASE("cli: bench emits one row per instance and method") {
  auto dir = tmp("cli_suite");
  fs::create_directories(dir);
  store_instance(testfx::example1(), (dir / "ex1_unit.vne").string());
  store_instance(testfx::example2(), (dir / "ex2_unit.vne").string());
  auto csv = tmp("cli_bench.csv");
  auto res = run_cli("bench --suite " + dir.string() + " --out " + csv.string() +
                     " --time-limit 20 --seed 2");
  CHECK(res.exit_code == 0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "instance,regime,method,bound_or_cost,status,seconds");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);  // 2 instances x 4 methods
  fs::remove_all(dir);
  fs::remove(csv);
}
