#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace vne::mip {

using VarId = int;
using RowId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Feasibility / integrality / reduced-cost tolerance used across the whole
/// artifact. All solver comparisons go through this value.
inline constexpr double kTol = 1e-6;

enum class Sense { LessEqual, Equal, GreaterEqual };

enum class Status {
  Optimal,
  Feasible,  // time-limited MIP with an incumbent
  Infeasible,
  Unbounded,
  NoSolutionFound,  // time-limited MIP without an incumbent
};

std::string to_string(Status s);

/// Backend-neutral minimization model: variables with bounds/integrality and
/// linear rows with stable ids, exactly what the formulations need.
class Model {
 public:
  struct Var {
    double lb = 0.0;
    double ub = kInf;
    double obj = 0.0;
    bool integer = false;
    int branch_priority = 0;  // higher branches first in the MIP search
  };
  struct Row {
    std::vector<std::pair<VarId, double>> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
  };

  VarId add_var(double lb, double ub, double obj, bool integer = false,
                int branch_priority = 0);
  RowId add_row(std::vector<std::pair<VarId, double>> terms, Sense sense,
                double rhs);

  int var_count() const { return static_cast<int>(vars_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const Var& var(VarId j) const { return vars_[static_cast<size_t>(j)]; }
  const Row& row(RowId r) const { return rows_[static_cast<size_t>(r)]; }
  void set_obj(VarId j, double c) { vars_[static_cast<size_t>(j)].obj = c; }
  void set_branch_priority(VarId j, int p) {
    vars_[static_cast<size_t>(j)].branch_priority = p;
  }

  /// Throws BackendFailure when a row references a missing variable or a
  /// bound pair is inverted.
  void check() const;

  /// Debug export in CPLEX LP text format (not bit-exact, for inspection).
  void write_lp(std::ostream& out) const;
  void write_lp_file(const std::string& path) const;

 private:
  std::vector<Var> vars_;
  std::vector<Row> rows_;
};

struct SolveOutcome {
  Status status = Status::NoSolutionFound;
  double objective = 0.0;
  std::vector<double> primal;
  /// Row duals, present for pure LP solves only. Sign convention under
  /// minimization: >=-rows have duals >= 0, <=-rows <= 0, =-rows free.
  std::vector<double> duals;
  /// Best proven lower bound (MIP); equals objective when Optimal.
  double bound = -kInf;
  long iterations = 0;
  long nodes = 0;
};

/// Solves the LP relaxation (integrality dropped) by bounded-variable primal
/// simplex and returns primal values plus row duals. Every solve self-checks
/// strong duality to 1e-6. Deterministic.
SolveOutcome solve_lp(const Model& m);

/// Branch-and-bound MIP solve. An optional start vector, when feasible, seeds
/// the incumbent. Honors the wall-clock time limit: expiry yields Feasible
/// (incumbent found) or NoSolutionFound, with the best proven bound filled in.
SolveOutcome solve_mip(const Model& m, double time_limit_seconds = kInf,
                       const std::vector<double>* start = nullptr);

/// Incremental simplex engine behind solve_lp/solve_mip. Exposed so column
/// generation can append columns and re-optimize from the previous basis, and
/// so branch-and-bound can change bounds and dual-reoptimize.
class LpEngine {
 public:
  explicit LpEngine(const Model& m);
  ~LpEngine();
  LpEngine(LpEngine&&) noexcept;
  LpEngine& operator=(LpEngine&&) noexcept;

  Status solve();  // two-phase primal from the current basis
  Status reoptimize_dual();  // after bound changes

  VarId add_column(double lb, double ub, double obj,
                   std::vector<std::pair<RowId, double>> terms);
  void set_var_bounds(VarId j, double lb, double ub);
  double var_lb(VarId j) const;
  double var_ub(VarId j) const;

  double objective() const;
  double value(VarId j) const;
  std::vector<double> primal() const;
  std::vector<double> duals() const;
  long iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vne::mip
