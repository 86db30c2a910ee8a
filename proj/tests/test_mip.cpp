#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "vne/errors.hpp"
#include "vne/mip.hpp"
#include "vne/rng.hpp"

using namespace vne;
using namespace vne::mip;

TEST_CASE("lp: min x subject to x >= 3") {
  Model m;
  VarId x = m.add_var(-kInf, kInf, 1.0);
  m.add_row({{x, 1.0}}, Sense::GreaterEqual, 3.0);
  auto out = solve_lp(m);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.objective == doctest::Approx(3.0));
  CHECK(out.primal[0] == doctest::Approx(3.0));
  CHECK(out.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: infeasible box") {
  Model m;
  VarId x = m.add_var(0.0, kInf, 0.0);
  m.add_row({{x, 1.0}}, Sense::LessEqual, -1.0);
  auto out = solve_lp(m);
  CHECK(out.status == Status::Infeasible);
}

TEST_CASE("lp: unbounded ray") {
  Model m;
  VarId x = m.add_var(0.0, kInf, -1.0);
  m.add_row({{x, 1.0}}, Sense::GreaterEqual, 0.0);
  auto out = solve_lp(m);
  CHECK(out.status == Status::Unbounded);
}

TEST_CASE("lp: dual sign conventions") {
  // min x + y  s.t.  x + y >= 2 (binding, dual >= 0), x <= 5 (slack, dual 0),
  //                  x - y = 0 (binding, free dual)
  Model m;
  VarId x = m.add_var(0.0, kInf, 1.0);
  VarId y = m.add_var(0.0, kInf, 1.0);
  RowId r1 = m.add_row({{x, 1.0}, {y, 1.0}}, Sense::GreaterEqual, 2.0);
  RowId r2 = m.add_row({{x, 1.0}}, Sense::LessEqual, 5.0);
  RowId r3 = m.add_row({{x, 1.0}, {y, -1.0}}, Sense::Equal, 0.0);
  auto out = solve_lp(m);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.objective == doctest::Approx(2.0));
  CHECK(out.duals[static_cast<size_t>(r1)] >= -1e-9);
  CHECK(out.duals[static_cast<size_t>(r1)] == doctest::Approx(1.0));
  CHECK(out.duals[static_cast<size_t>(r2)] == doctest::Approx(0.0));
  (void)r3;
}

TEST_CASE("lp: bounded variables and maximizing direction via negation") {
  // min -3a - 5b st a <= 4, 2b <= 12, 3a + 2b <= 18 (classic), binaries off.
  Model m;
  VarId a = m.add_var(0.0, 4.0, -3.0);
  VarId b = m.add_var(0.0, kInf, -5.0);
  m.add_row({{b, 2.0}}, Sense::LessEqual, 12.0);
  m.add_row({{a, 3.0}, {b, 2.0}}, Sense::LessEqual, 18.0);
  auto out = solve_lp(m);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.objective == doctest::Approx(-36.0));
  CHECK(out.primal[static_cast<size_t>(a)] == doctest::Approx(2.0));
  CHECK(out.primal[static_cast<size_t>(b)] == doctest::Approx(6.0));
}

TEST_CASE("lp: equality rows drive phase 1") {
  Model m;
  VarId x = m.add_var(0.0, 10.0, 2.0);
  VarId y = m.add_var(0.0, 10.0, 3.0);
  m.add_row({{x, 1.0}, {y, 1.0}}, Sense::Equal, 7.0);
  m.add_row({{x, 1.0}, {y, -1.0}}, Sense::Equal, 1.0);
  auto out = solve_lp(m);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.primal[static_cast<size_t>(x)] == doctest::Approx(4.0));
  CHECK(out.primal[static_cast<size_t>(y)] == doctest::Approx(3.0));
}

namespace {

/// Random LPs with a known feasible point; checks strong duality and basic
/// KKT conditions internally (solve_lp already self-checks duality).
void random_lp_roundtrip(std::uint64_t seed) {
  Rng rng(seed);
  int n = static_cast<int>(rng.next_int(1, 8));
  int rows = static_cast<int>(rng.next_int(1, 10));
  Model m;
  std::vector<double> x0;
  for (int j = 0; j < n; ++j) {
    double ub = static_cast<double>(rng.next_int(1, 10));
    m.add_var(0.0, ub, static_cast<double>(rng.next_int(-5, 5)));
    x0.push_back(static_cast<double>(rng.next_int(0, static_cast<std::int64_t>(ub))));
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<std::pair<VarId, double>> terms;
    double lhs = 0.0;
    for (VarId j = 0; j < n; ++j) {
      if (rng.next_below(2) == 0) continue;
      double c = static_cast<double>(rng.next_int(-4, 4));
      if (c == 0) continue;
      terms.push_back({j, c});
      lhs += c * x0[static_cast<size_t>(j)];
    }
    if (terms.empty()) continue;
    // Keep x0 feasible so the LP always has an optimum.
    m.add_row(terms, Sense::LessEqual, lhs + static_cast<double>(rng.next_int(0, 5)));
  }
  auto out = solve_lp(m);
  REQUIRE(out.status == Status::Optimal);
  // KKT spot checks: feasibility of returned primal point.
  for (RowId r = 0; r < m.row_count(); ++r) {
    double lhs = 0.0;
    for (auto [j, c] : m.row(r).terms) lhs += c * out.primal[static_cast<size_t>(j)];
    CHECK(lhs <= m.row(r).rhs + 1e-6);
    CHECK(out.duals[static_cast<size_t>(r)] <= 1e-9);  // <= rows: dual <= 0
  }
}

}  // namespace

TEST_CASE("lp: randomized strong duality suite") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) random_lp_roundtrip(seed);
}

TEST_CASE("mip: small knapsacks agree with brute force") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    int n = static_cast<int>(rng.next_int(2, 10));
    std::vector<double> value(static_cast<size_t>(n)), weight(static_cast<size_t>(n));
    double cap = 0;
    for (int j = 0; j < n; ++j) {
      value[static_cast<size_t>(j)] = static_cast<double>(rng.next_int(1, 20));
      weight[static_cast<size_t>(j)] = static_cast<double>(rng.next_int(1, 12));
      cap += weight[static_cast<size_t>(j)];
    }
    cap = std::floor(cap / 2);
    Model m;
    std::vector<std::pair<VarId, double>> row;
    for (int j = 0; j < n; ++j) {
      VarId v = m.add_var(0.0, 1.0, -value[static_cast<size_t>(j)], true);
      row.push_back({v, weight[static_cast<size_t>(j)]});
    }
    m.add_row(row, Sense::LessEqual, cap);
    auto out = solve_mip(m);
    REQUIRE(out.status == Status::Optimal);

    double best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double w = 0, v = 0;
      for (int j = 0; j < n; ++j)
        if ((mask >> j) & 1) {
          w += weight[static_cast<size_t>(j)];
          v += value[static_cast<size_t>(j)];
        }
      if (w <= cap) best = std::max(best, v);
    }
    CHECK(out.objective == doctest::Approx(-best));
    CHECK(out.bound == doctest::Approx(out.objective));

    // Re-validate the incumbent against all constraints (integer tolerance).
    double w = 0;
    for (int j = 0; j < n; ++j) {
      double x = out.primal[static_cast<size_t>(j)];
      CHECK(std::abs(x - std::round(x)) <= 1e-6);
      w += weight[static_cast<size_t>(j)] * x;
    }
    CHECK(w <= cap + 1e-6);
  }
}

TEST_CASE("mip: equality-constrained integer programs vs enumeration") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    Rng rng(seed);
    int n = static_cast<int>(rng.next_int(2, 9));
    Model m;
    std::vector<double> cost(static_cast<size_t>(n));
    std::vector<double> a(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      cost[static_cast<size_t>(j)] = static_cast<double>(rng.next_int(-6, 6));
      a[static_cast<size_t>(j)] = static_cast<double>(rng.next_int(1, 4));
      m.add_var(0.0, 1.0, cost[static_cast<size_t>(j)], true);
    }
    double total = 0;
    for (double v : a) total += v;
    double rhs = std::floor(total / 3);
    std::vector<std::pair<VarId, double>> row;
    for (int j = 0; j < n; ++j) row.push_back({j, a[static_cast<size_t>(j)]});
    m.add_row(row, Sense::GreaterEqual, rhs);

    auto out = solve_mip(m);
    double best = kInf;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double lhs = 0, c = 0;
      for (int j = 0; j < n; ++j)
        if ((mask >> j) & 1) {
          lhs += a[static_cast<size_t>(j)];
          c += cost[static_cast<size_t>(j)];
        }
      if (lhs >= rhs) best = std::min(best, c);
    }
    if (best == kInf) {
      CHECK(out.status == Status::Infeasible);
    } else {
      REQUIRE(out.status == Status::Optimal);
      CHECK(out.objective == doctest::Approx(best));
    }
  }
}

TEST_CASE("mip: pure LP passthrough when no integers") {
  Model m;
  VarId x = m.add_var(0.0, 2.5, -1.0);
  m.add_row({{x, 1.0}}, Sense::LessEqual, 2.0);
  auto out = solve_mip(m);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.objective == doctest::Approx(-2.0));
  CHECK(out.duals.empty());
}

TEST_CASE("mip: start vector seeds the incumbent") {
  Model m;
  VarId x = m.add_var(0.0, 1.0, -1.0, true);
  VarId y = m.add_var(0.0, 1.0, -1.0, true);
  m.add_row({{x, 1.0}, {y, 1.0}}, Sense::LessEqual, 1.0);
  std::vector<double> hint{1.0, 0.0};
  auto out = solve_mip(m, kInf, &hint);
  REQUIRE(out.status == Status::Optimal);
  CHECK(out.objective == doctest::Approx(-1.0));
}

TEST_CASE("engine: add_column reoptimizes from the previous basis") {
  // Covering LP; a cheaper column added later must enter the basis.
  Model m;
  VarId a = m.add_var(0.0, kInf, 3.0);
  RowId cover = m.add_row({{a, 1.0}}, Sense::GreaterEqual, 1.0);
  LpEngine engine(m);
  REQUIRE(engine.solve() == Status::Optimal);
  CHECK(engine.objective() == doctest::Approx(3.0));
  engine.add_column(0.0, kInf, 1.0, {{cover, 1.0}});
  REQUIRE(engine.solve() == Status::Optimal);
  CHECK(engine.objective() == doctest::Approx(1.0));
}

TEST_CASE("engine: bound change plus dual reoptimize") {
  Model m;
  VarId x = m.add_var(0.0, 4.0, -1.0);
  VarId y = m.add_var(0.0, 4.0, -1.0);
  m.add_row({{x, 1.0}, {y, 1.0}}, Sense::LessEqual, 5.0);
  LpEngine engine(m);
  REQUIRE(engine.solve() == Status::Optimal);
  CHECK(engine.objective() == doctest::Approx(-5.0));
  engine.set_var_bounds(x, 0.0, 1.0);
  REQUIRE(engine.reoptimize_dual() == Status::Optimal);
  CHECK(engine.objective() == doctest::Approx(-5.0));
  engine.set_var_bounds(y, 0.0, 1.0);
  REQUIRE(engine.reoptimize_dual() == Status::Optimal);
  CHECK(engine.objective() == doctest::Approx(-2.0));
}

TEST_CASE("model: lp export smoke") {
  Model m;
  VarId x = m.add_var(0.0, 1.0, 2.5, true);
  m.add_row({{x, 1.0}}, Sense::LessEqual, 1.0);
  std::ostringstream out;
  m.write_lp(out);
  CHECK(out.str().find("Minimize") != std::string::npos);
  CHECK(out.str().find("x0") != std::string::npos);
}

TEST_CASE("model: malformed rows are rejected") {
  Model m;
  m.add_var(0.0, 1.0, 0.0);
  m.add_row({{5, 1.0}}, Sense::LessEqual, 1.0);
  CHECK_THROWS_AS(m.check(), BackendFailure);
}
