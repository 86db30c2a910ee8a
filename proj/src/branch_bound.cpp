#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <vector>

#include "vne/errors.hpp"
#include "vne/mip.hpp"

namespace vne::mip {

namespace {

using Clock = std::chrono::steady_clock;

double point_objective(const Model& model, const std::vector<double>& x) {
  double obj = 0.0;
  for (VarId j = 0; j < model.var_count(); ++j)
    obj += model.var(j).obj * x[static_cast<size_t>(j)];
  return obj;
}

/// Full row/bound/integrality check of a candidate point against the model
/// itself, independent of the simplex state. Guards incumbents against
/// numerical drift in the engine.
bool point_feasible(const Model& model, const std::vector<double>& x) {
  if (x.size() != static_cast<size_t>(model.var_count())) return false;
  for (VarId j = 0; j < model.var_count(); ++j) {
    const auto& v = model.var(j);
    double val = x[static_cast<size_t>(j)];
    if (val < v.lb - kTol || val > v.ub + kTol) return false;
    if (v.integer && std::abs(val - std::round(val)) > kTol) return false;
  }
  for (RowId r = 0; r < model.row_count(); ++r) {
    const auto& row = model.row(r);
    double lhs = 0.0;
    for (auto [j, a] : row.terms) lhs += a * x[static_cast<size_t>(j)];
    double slack = row.rhs - lhs;
    double tol = kTol * (1 + std::abs(row.rhs));
    if (row.sense == Sense::LessEqual && slack < -tol) return false;
    if (row.sense == Sense::GreaterEqual && slack > tol) return false;
    if (row.sense == Sense::Equal && std::abs(slack) > tol) return false;
  }
  return true;
}

/// True when the objective is provably integral on every integer-feasible
/// point: all variables with nonzero cost are integer with integral cost.
bool integral_objective(const Model& model) {
  for (VarId j = 0; j < model.var_count(); ++j) {
    const auto& v = model.var(j);
    if (v.obj == 0.0) continue;
    if (!v.integer) return false;
    if (std::abs(v.obj - std::round(v.obj)) > 1e-12) return false;
  }
  return true;
}

struct Searcher {
  const Model& model;
  LpEngine& lp;
  Clock::time_point deadline;
  bool timed_out = false;
  long nodes = 0;

  bool have_incumbent = false;
  double best_obj = kInf;
  std::vector<double> best_x{};
  double improve_eps = 1e-9;

  bool out_of_time() {
    if (timed_out) return true;
    if (Clock::now() >= deadline) timed_out = true;
    return timed_out;
  }

  double cutoff() const {
    return have_incumbent ? best_obj - improve_eps : kInf;
  }

  VarId pick_branch_var() const {
    VarId best = -1;
    int best_prio = 0;
    double best_frac = 0.0;
    for (VarId j = 0; j < model.var_count(); ++j) {
      if (!model.var(j).integer) continue;
      double v = lp.value(j);
      double dist = std::abs(v - std::round(v));
      if (dist <= kTol) continue;
      double frac = v - std::floor(v);
      double score = std::min(frac, 1.0 - frac);  // closeness to 1/2
      int prio = model.var(j).branch_priority;
      if (best == -1 || prio > best_prio ||
          (prio == best_prio && score > best_frac + 1e-12)) {
        best = j;
        best_prio = prio;
        best_frac = score;
      }
    }
    return best;
  }

  /// Bounded LP-guided dive from the current node: round the most fractional
  /// integer variable to its nearest value, repair with the other side when a
  /// fix goes infeasible, and record the incumbent when everything lands
  /// integral. Bounds are restored afterwards.
  void dive_for_incumbent() {
    std::vector<std::tuple<VarId, double, double>> trail;
    int guard = 0;
    int budget = 0;
    for (VarId j = 0; j < model.var_count(); ++j) budget += model.var(j).integer;
    budget = 3 * budget + 20;
    while (guard++ < budget && !out_of_time()) {
      VarId j = pick_branch_var();
      if (j == -1) {
        std::vector<double> x = lp.primal();
        if (point_feasible(model, x)) {
          double obj = point_objective(model, x);
          if (obj < best_obj) {
            best_obj = obj;
            best_x = std::move(x);
            have_incumbent = true;
          }
        }
        break;
      }
      double v = lp.value(j);
      double lo = std::floor(v), hi = lo + 1.0;
      double olb = lp.var_lb(j), oub = lp.var_ub(j);
      bool down_first = (v - lo) <= 0.5;
      bool fixed = false;
      for (int side = 0; side < 2 && !fixed; ++side) {
        bool down = (side == 0) == down_first;
        trail.push_back({j, olb, oub});
        if (down)
          lp.set_var_bounds(j, olb, lo);
        else
          lp.set_var_bounds(j, hi, oub);
        if (lp.reoptimize_dual() == Status::Optimal && lp.objective() < cutoff()) {
          fixed = true;
        } else {
          lp.set_var_bounds(j, olb, oub);
          trail.pop_back();
        }
      }
      if (!fixed) break;
    }
    for (auto it = trail.rbegin(); it != trail.rend(); ++it)
      lp.set_var_bounds(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it));
    lp.reoptimize_dual();
  }

  /// Explores the subtree rooted at the engine's current (solved, optimal)
  /// node. Returns a valid lower bound for the subtree: exact when fully
  /// explored, the abandoned node's LP value on timeout.
  double explore() {
    double obj = lp.objective();
    if (obj >= cutoff()) return obj;
    VarId j = pick_branch_var();
    if (j == -1) {
      std::vector<double> x = lp.primal();
      if (point_feasible(model, x)) {
        if (point_objective(model, x) < best_obj) {
          best_obj = point_objective(model, x);
          best_x = std::move(x);
          have_incumbent = true;
        }
      }
      return obj;
    }
    double v = lp.value(j);
    double down_ub = std::floor(v);
    double up_lb = down_ub + 1.0;
    bool down_first = (v - down_ub) <= 0.5;

    double subtree = kInf;
    for (int side = 0; side < 2; ++side) {
      if (out_of_time()) {
        subtree = std::min(subtree, obj);
        break;
      }
      bool down = (side == 0) == down_first;
      double olb = lp.var_lb(j), oub = lp.var_ub(j);
      if (down)
        lp.set_var_bounds(j, olb, down_ub);
      else
        lp.set_var_bounds(j, up_lb, oub);
      ++nodes;
      Status st = lp.reoptimize_dual();
      if (st == Status::Optimal) subtree = std::min(subtree, explore());
      // Infeasible children contribute +inf to the subtree bound.
      lp.set_var_bounds(j, olb, oub);
    }
    return std::max(subtree, obj);
  }
};

}  // namespace

SolveOutcome solve_mip(const Model& model, double time_limit_seconds,
                       const std::vector<double>* start) {
  model.check();
  SolveOutcome out;
  LpEngine lp(model);
  Status root = lp.solve();
  out.iterations = lp.iterations();
  if (root == Status::Infeasible) {
    out.status = Status::Infeasible;
    out.bound = kInf;
    return out;
  }
  if (root == Status::Unbounded) {
    out.status = Status::Unbounded;
    out.bound = -kInf;
    return out;
  }

  Searcher search{.model = model,
                  .lp = lp,
                  .deadline = Clock::now() +
                              std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(
                                      std::isfinite(time_limit_seconds)
                                          ? time_limit_seconds
                                          : 3.15e7))};
  search.improve_eps = integral_objective(model) ? 1.0 - kTol : 1e-9;
  if (start && point_feasible(model, *start)) {
    search.best_obj = point_objective(model, *start);
    search.best_x = *start;
    search.have_incumbent = true;
  }
  search.dive_for_incumbent();

  double bound = search.explore();
  out.iterations = lp.iterations();
  out.nodes = search.nodes;

  if (search.timed_out) {
    out.bound = bound;
    if (search.have_incumbent) {
      out.status = Status::Feasible;
      out.objective = search.best_obj;
      out.primal = std::move(search.best_x);
    } else {
      out.status = Status::NoSolutionFound;
    }
    return out;
  }
  if (!search.have_incumbent) {
    out.status = Status::Infeasible;
    out.bound = kInf;
    return out;
  }
  out.status = Status::Optimal;
  out.objective = search.best_obj;
  out.primal = std::move(search.best_x);
  out.bound = search.best_obj;
  return out;
}

}  // namespace vne::mip
