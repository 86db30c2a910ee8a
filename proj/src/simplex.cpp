#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

#include "vne/errors.hpp"
#include "vne/mip.hpp"

namespace vne::mip {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::Feasible:
      return "feasible";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::NoSolutionFound:
      return "no_solution";
  }
  return "?";
}

VarId Model::add_var(double lb, double ub, double obj, bool integer,
                     int branch_priority) {
  vars_.push_back(Var{lb, ub, obj, integer, branch_priority});
  return static_cast<VarId>(vars_.size()) - 1;
}

RowId Model::add_row(std::vector<std::pair<VarId, double>> terms, Sense sense,
                     double rhs) {
  rows_.push_back(Row{std::move(terms), sense, rhs});
  return static_cast<RowId>(rows_.size()) - 1;
}

void Model::check() const {
  for (const auto& v : vars_)
    if (v.lb > v.ub)
      throw BackendFailure("model: variable bounds inverted");
  for (const auto& r : rows_)
    for (auto [j, a] : r.terms) {
      if (j < 0 || j >= var_count())
        throw BackendFailure("model: row references missing variable");
      if (!std::isfinite(a))
        throw BackendFailure("model: non-finite coefficient");
    }
}

void Model::write_lp(std::ostream& out) const {
  auto var_name = [](VarId j) { return "x" + std::to_string(j); };
  out << "Minimize\n obj:";
  for (VarId j = 0; j < var_count(); ++j) {
    double c = var(j).obj;
    if (c == 0) continue;
    out << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << var_name(j);
  }
  out << "\nSubject To\n";
  for (RowId r = 0; r < row_count(); ++r) {
    const Row& row = rows_[static_cast<size_t>(r)];
    out << " c" << r << ":";
    for (auto [j, a] : row.terms)
      out << (a >= 0 ? " + " : " - ") << std::abs(a) << " " << var_name(j);
    switch (row.sense) {
      case Sense::LessEqual:
        out << " <= ";
        break;
      case Sense::Equal:
        out << " = ";
        break;
      case Sense::GreaterEqual:
        out << " >= ";
        break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (VarId j = 0; j < var_count(); ++j) {
    const Var& v = vars_[static_cast<size_t>(j)];
    if (v.lb == -kInf)
      out << " -inf <= " << var_name(j) << " <= "
          << (v.ub == kInf ? std::string("inf") : std::to_string(v.ub)) << "\n";
    else if (v.lb != 0 || v.ub != kInf)
      out << " " << v.lb << " <= " << var_name(j) << " <= "
          << (v.ub == kInf ? std::string("inf") : std::to_string(v.ub)) << "\n";
  }
  out << "General\n";
  for (VarId j = 0; j < var_count(); ++j)
    if (vars_[static_cast<size_t>(j)].integer) out << " " << var_name(j);
  out << "\nEnd\n";
}

void Model::write_lp_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot write");
  write_lp(out);
}

// ---------------------------------------------------------------------------
// Bounded-variable simplex with a dense explicit basis inverse. Rows are
// normalized as  a.x - s = 0  with the logical variable s carrying the row
// bounds, so the simplex right-hand side is identically zero and all state
// lives in variable bounds.

namespace {
constexpr double kPivTol = 1e-7;    // smallest usable pivot element; entries
                                    // below this are treated as drift noise
constexpr double kFeasTol = 1e-7;   // internal primal feasibility
constexpr double kDualTol = 1e-7;   // reduced cost threshold
constexpr int kRefactorEvery = 128;

struct SingularBasis {};
}  // namespace

struct LpEngine::Impl {
  enum VStat : unsigned char { kBasic, kAtLower, kAtUpper, kFreeNB };

  int m = 0;        // rows
  int nstruct = 0;  // structural variables; logicals follow at nstruct..
  std::vector<std::vector<std::pair<int, double>>> cols;  // structural only
  std::vector<double> cost, lb, ub;                       // size nstruct + m
  std::vector<VStat> vstat;
  std::vector<int> basic;   // row -> variable
  std::vector<int> row_of;  // variable -> row or -1
  std::vector<double> binv;  // m x m, row-major
  std::vector<double> xb;    // basic variable values
  long iters = 0;
  int pivots_since_refactor = 0;
  bool bland = false;
  int degenerate_streak = 0;

  std::vector<double> y, d, accum, rc_cache;

  int total() const { return nstruct + m; }

  template <typename F>
  void for_col(int j, F&& f) const {
    if (j < nstruct)
      for (auto [r, a] : cols[static_cast<size_t>(j)]) f(r, a);
    else
      f(j - nstruct, -1.0);
  }

  double nb_value(int j) const {
    switch (vstat[static_cast<size_t>(j)]) {
      case kAtLower:
        return lb[static_cast<size_t>(j)];
      case kAtUpper:
        return ub[static_cast<size_t>(j)];
      default:
        return 0.0;
    }
  }

  explicit Impl(const Model& model) {
    model.check();
    m = model.row_count();
    nstruct = model.var_count();
    cols.assign(static_cast<size_t>(nstruct), {});
    cost.assign(static_cast<size_t>(total()), 0.0);
    lb.resize(static_cast<size_t>(total()));
    ub.resize(static_cast<size_t>(total()));
    for (VarId j = 0; j < nstruct; ++j) {
      const auto& v = model.var(j);
      cost[static_cast<size_t>(j)] = v.obj;
      lb[static_cast<size_t>(j)] = v.lb;
      ub[static_cast<size_t>(j)] = v.ub;
    }
    for (RowId r = 0; r < m; ++r) {
      const auto& row = model.row(r);
      for (auto [j, a] : row.terms)
        if (a != 0.0) cols[static_cast<size_t>(j)].push_back({r, a});
      size_t s = static_cast<size_t>(nstruct + r);
      switch (row.sense) {
        case Sense::LessEqual:
          lb[s] = -kInf;
          ub[s] = row.rhs;
          break;
        case Sense::GreaterEqual:
          lb[s] = row.rhs;
          ub[s] = kInf;
          break;
        case Sense::Equal:
          lb[s] = ub[s] = row.rhs;
          break;
      }
    }
    reset_basis();
  }

  void reset_basis() {
    vstat.assign(static_cast<size_t>(total()), kAtLower);
    for (int j = 0; j < nstruct; ++j) {
      if (lb[static_cast<size_t>(j)] > -kInf)
        vstat[static_cast<size_t>(j)] = kAtLower;
      else if (ub[static_cast<size_t>(j)] < kInf)
        vstat[static_cast<size_t>(j)] = kAtUpper;
      else
        vstat[static_cast<size_t>(j)] = kFreeNB;
    }
    basic.resize(static_cast<size_t>(m));
    row_of.assign(static_cast<size_t>(total()), -1);
    for (int r = 0; r < m; ++r) {
      basic[static_cast<size_t>(r)] = nstruct + r;
      row_of[static_cast<size_t>(nstruct + r)] = r;
      vstat[static_cast<size_t>(nstruct + r)] = kBasic;
    }
    binv.assign(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
    for (int r = 0; r < m; ++r)
      binv[static_cast<size_t>(r) * static_cast<size_t>(m) +
           static_cast<size_t>(r)] = -1.0;
    compute_xb();
    pivots_since_refactor = 0;
  }

  /// Rebuilds the basis inverse from scratch (Gauss-Jordan with partial
  /// pivoting) and refreshes the basic values.
  void refactor() {
    const size_t mm = static_cast<size_t>(m);
    std::vector<double> a(mm * mm, 0.0);
    for (int r = 0; r < m; ++r)
      for_col(basic[static_cast<size_t>(r)], [&](int row, double val) {
        a[static_cast<size_t>(row) * mm + static_cast<size_t>(r)] = val;
      });
    binv.assign(mm * mm, 0.0);
    for (size_t i = 0; i < mm; ++i) binv[i * mm + i] = 1.0;
    for (size_t col = 0; col < mm; ++col) {
      size_t piv = col;
      double best = std::abs(a[col * mm + col]);
      for (size_t i = col + 1; i < mm; ++i)
        if (std::abs(a[i * mm + col]) > best) {
          best = std::abs(a[i * mm + col]);
          piv = i;
        }
      if (best < 1e-12) throw SingularBasis{};
      if (piv != col) {
        for (size_t k = 0; k < mm; ++k) {
          std::swap(a[piv * mm + k], a[col * mm + k]);
          std::swap(binv[piv * mm + k], binv[col * mm + k]);
        }
      }
      double inv = 1.0 / a[col * mm + col];
      for (size_t k = 0; k < mm; ++k) {
        a[col * mm + k] *= inv;
        binv[col * mm + k] *= inv;
      }
      for (size_t i = 0; i < mm; ++i) {
        if (i == col) continue;
        double f = a[i * mm + col];
        if (f == 0.0) continue;
        for (size_t k = 0; k < mm; ++k) {
          a[i * mm + k] -= f * a[col * mm + k];
          binv[i * mm + k] -= f * binv[col * mm + k];
        }
      }
    }
    compute_xb();
    pivots_since_refactor = 0;
  }

  void compute_xb() {
    accum.assign(static_cast<size_t>(m), 0.0);
    for (int j = 0; j < total(); ++j) {
      if (vstat[static_cast<size_t>(j)] == kBasic) continue;
      double v = nb_value(j);
      if (v == 0.0) continue;
      for_col(j, [&](int r, double a) { accum[static_cast<size_t>(r)] += a * v; });
    }
    xb.assign(static_cast<size_t>(m), 0.0);
    const size_t mm = static_cast<size_t>(m);
    for (size_t i = 0; i < mm; ++i) {
      double s = 0.0;
      const double* row = &binv[i * mm];
      for (size_t k = 0; k < mm; ++k) s -= row[k] * accum[k];
      xb[i] = s;
    }
  }

  /// d = B^-1 A_j for a (sparse) column.
  void ftran(int j) {
    const size_t mm = static_cast<size_t>(m);
    d.assign(mm, 0.0);
    for_col(j, [&](int r, double a) {
      const size_t rr = static_cast<size_t>(r);
      for (size_t i = 0; i < mm; ++i) d[i] += binv[i * mm + rr] * a;
    });
  }

  /// y = cB^T B^-1 where cB is given per basic slot.
  void compute_y(const std::vector<double>& cb) {
    const size_t mm = static_cast<size_t>(m);
    y.assign(mm, 0.0);
    for (size_t i = 0; i < mm; ++i) {
      double c = cb[i];
      if (c == 0.0) continue;
      const double* row = &binv[i * mm];
      for (size_t k = 0; k < mm; ++k) y[k] += c * row[k];
    }
  }

  double dot_col(int j, const std::vector<double>& vec) const {
    double s = 0.0;
    for_col(j, [&](int r, double a) { s += vec[static_cast<size_t>(r)] * a; });
    return s;
  }

  double infeas(int slot) const {
    int j = basic[static_cast<size_t>(slot)];
    double v = xb[static_cast<size_t>(slot)];
    if (v < lb[static_cast<size_t>(j)] - kFeasTol)
      return lb[static_cast<size_t>(j)] - v;
    if (v > ub[static_cast<size_t>(j)] + kFeasTol)
      return v - ub[static_cast<size_t>(j)];
    return 0.0;
  }

  double total_infeas() const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += infeas(i);
    return s;
  }

  double objective_value() const {
    double s = 0.0;
    for (int j = 0; j < nstruct; ++j) {
      double c = cost[static_cast<size_t>(j)];
      if (c == 0.0) continue;
      double v = vstat[static_cast<size_t>(j)] == kBasic
                     ? xb[static_cast<size_t>(row_of[static_cast<size_t>(j)])]
                     : nb_value(j);
      s += c * v;
    }
    return s;
  }

  void update_binv_and_pivot(int entering, int leave_slot, double enter_value,
                             VStat leaving_stat) {
    const size_t mm = static_cast<size_t>(m);
    const size_t r = static_cast<size_t>(leave_slot);
    double piv = d[r];
    if (std::abs(piv) < 1e-12) throw BackendFailure("simplex: zero pivot");
    // A small pivot poisons the inverse; refresh it right after the update.
    bool fragile = std::abs(piv) < 1e-6;
    double inv = 1.0 / piv;
    double* prow = &binv[r * mm];
    for (size_t k = 0; k < mm; ++k) prow[k] *= inv;
    for (size_t i = 0; i < mm; ++i) {
      if (i == r) continue;
      double f = d[i];
      if (f == 0.0) continue;
      double* irow = &binv[i * mm];
      for (size_t k = 0; k < mm; ++k) irow[k] -= f * prow[k];
    }
    int leaving = basic[r];
    vstat[static_cast<size_t>(leaving)] = leaving_stat;
    row_of[static_cast<size_t>(leaving)] = -1;
    basic[r] = entering;
    row_of[static_cast<size_t>(entering)] = leave_slot;
    vstat[static_cast<size_t>(entering)] = kBasic;
    xb[r] = enter_value;
    ++pivots_since_refactor;
    ++iters;
    if (fragile || pivots_since_refactor >= kRefactorEvery) refactor();
  }

  // ---- primal simplex -----------------------------------------------------

  /// One primal iteration. phase1 drives the composite infeasibility
  /// objective; phase2 the true costs. Returns false when no entering
  /// variable exists (phase optimum reached).
  enum class StepResult { Pivoted, NoEntering, Unbounded };

  StepResult primal_step(bool phase1) {
    std::vector<double> cb(static_cast<size_t>(m), 0.0);
    if (phase1) {
      for (int i = 0; i < m; ++i) {
        int j = basic[static_cast<size_t>(i)];
        double v = xb[static_cast<size_t>(i)];
        if (v < lb[static_cast<size_t>(j)] - kFeasTol)
          cb[static_cast<size_t>(i)] = -1.0;
        else if (v > ub[static_cast<size_t>(j)] + kFeasTol)
          cb[static_cast<size_t>(i)] = 1.0;
      }
    } else {
      for (int i = 0; i < m; ++i)
        cb[static_cast<size_t>(i)] = cost[static_cast<size_t>(basic[static_cast<size_t>(i)])];
    }
    compute_y(cb);

    int q = -1;
    double best_score = kDualTol;
    int dir = 0;
    for (int j = 0; j < total(); ++j) {
      VStat s = vstat[static_cast<size_t>(j)];
      if (s == kBasic) continue;
      bool fixed = ub[static_cast<size_t>(j)] - lb[static_cast<size_t>(j)] < 1e-12;
      if (fixed) continue;
      double rc = (phase1 ? 0.0 : cost[static_cast<size_t>(j)]) - dot_col(j, y);
      int cand_dir = 0;
      if (s == kAtLower && rc < -kDualTol)
        cand_dir = 1;
      else if (s == kAtUpper && rc > kDualTol)
        cand_dir = -1;
      else if (s == kFreeNB && std::abs(rc) > kDualTol)
        cand_dir = rc < 0 ? 1 : -1;
      if (cand_dir == 0) continue;
      if (bland) {  // first eligible index
        q = j;
        dir = cand_dir;
        break;
      }
      if (std::abs(rc) > best_score) {
        best_score = std::abs(rc);
        q = j;
        dir = cand_dir;
      }
    }
    if (q == -1) return StepResult::NoEntering;

    ftran(q);
    // Ratio test: find the largest step along +-d before a basic variable
    // blocks (phase 1: infeasible basics moving away from their violated
    // bound never block) or the entering variable hits its opposite bound.
    double span = ub[static_cast<size_t>(q)] - lb[static_cast<size_t>(q)];
    double t_best = vstat[static_cast<size_t>(q)] == kFreeNB ? kInf : span;
    int block = -1;           // slot index, or -1 for a bound flip
    double block_piv = 0.0;
    VStat block_stat = kAtLower;
    for (int i = 0; i < m; ++i) {
      double di = d[static_cast<size_t>(i)];
      if (std::abs(di) < kPivTol) continue;
      double rate = -dir * di;
      int j = basic[static_cast<size_t>(i)];
      double v = xb[static_cast<size_t>(i)];
      double t;
      VStat stat;
      if (rate > 0) {
        if (v < lb[static_cast<size_t>(j)] - kFeasTol) {
          t = (lb[static_cast<size_t>(j)] - v) / rate;
          stat = kAtLower;
        } else if (v > ub[static_cast<size_t>(j)] + kFeasTol) {
          continue;  // rising further above: phase-1 objective handles it
        } else if (ub[static_cast<size_t>(j)] < kInf) {
          t = (ub[static_cast<size_t>(j)] - v) / rate;
          stat = kAtUpper;
        } else {
          continue;
        }
      } else {
        if (v > ub[static_cast<size_t>(j)] + kFeasTol) {
          t = (v - ub[static_cast<size_t>(j)]) / -rate;
          stat = kAtUpper;
        } else if (v < lb[static_cast<size_t>(j)] - kFeasTol) {
          continue;
        } else if (lb[static_cast<size_t>(j)] > -kInf) {
          t = (v - lb[static_cast<size_t>(j)]) / -rate;
          stat = kAtLower;
        } else {
          continue;
        }
      }
      t = std::max(t, 0.0);
      bool better;
      if (t < t_best - 1e-10)
        better = true;
      else if (t > t_best + 1e-10)
        better = false;
      else if (block == -1)
        better = true;  // prefer a pivot over a bound flip at equal step
      else if (bland)
        better = j < basic[static_cast<size_t>(block)];
      else
        better = std::abs(di) > std::abs(block_piv) + 1e-12;
      if (better) {
        t_best = t;
        block = i;
        block_piv = di;
        block_stat = stat;
      }
    }

    if (t_best >= kInf) return StepResult::Unbounded;
    degenerate_streak = t_best < 1e-11 ? degenerate_streak + 1 : 0;
    if (degenerate_streak > 2 * m + 200) bland = true;
    if (t_best > 1e-9) bland = false;

    double start_val = nb_value(q);
    if (block == -1) {
      // Bound flip: entering runs to its other bound, basis unchanged.
      for (int i = 0; i < m; ++i)
        xb[static_cast<size_t>(i)] -= dir * t_best * d[static_cast<size_t>(i)];
      vstat[static_cast<size_t>(q)] =
          vstat[static_cast<size_t>(q)] == kAtLower ? kAtUpper : kAtLower;
      ++iters;
      return StepResult::Pivoted;
    }
    for (int i = 0; i < m; ++i)
      xb[static_cast<size_t>(i)] -= dir * t_best * d[static_cast<size_t>(i)];
    update_binv_and_pivot(q, block, start_val + dir * t_best, block_stat);
    return StepResult::Pivoted;
  }

  Status primal_solve() {
    for (int attempt = 0;; ++attempt) {
      try {
        return primal_loop();
      } catch (const SingularBasis&) {
        if (attempt >= 1) throw BackendFailure("simplex: singular basis");
        reset_basis();  // restart from the logical basis, phase 1 re-runs
      }
    }
  }

  Status primal_loop() {
    const long iter_cap = 20000L + 400L * m;
    bool confirmed = false;
    long local = 0;
    while (true) {
      if (local++ > iter_cap) throw BackendFailure("simplex: iteration cap hit");
      bool phase1 = total_infeas() > kFeasTol;
      StepResult res = primal_step(phase1);
      if (res == StepResult::Pivoted) {
        confirmed = false;
        continue;
      }
      if (res == StepResult::Unbounded) {
        if (phase1) throw BackendFailure("simplex: unbounded phase-1 ray");
        if (!confirmed) {
          refactor();
          confirmed = true;
          continue;
        }
        return Status::Unbounded;
      }
      // No entering column.
      if (!confirmed && pivots_since_refactor > 0) {
        refactor();
        confirmed = true;
        continue;
      }
      if (total_infeas() > kFeasTol) {
        if (phase1) return Status::Infeasible;
        continue;  // drift made a phase-2 basis infeasible: re-enter phase 1
      }
      if (phase1) continue;  // became feasible exactly at the scan: go phase 2
      return Status::Optimal;
    }
  }

  // ---- dual simplex -------------------------------------------------------

  Status dual_solve() {
    try {
      return dual_loop();
    } catch (const SingularBasis&) {
      reset_basis();  // dual warm start lost; fall back to a fresh solve
      return primal_solve();
    }
  }

  Status dual_loop() {
    const long iter_cap = 2000L + 10L * m;
    long local = 0;
    bool confirmed = false;
    int dual_degenerate = 0;
    bool dual_bland = false;
    while (true) {
      if (local++ > iter_cap) {
        // Heavily degenerate models can stall the dual; a fresh primal solve
        // is always a sound (if slower) answer.
        reset_basis();
        return primal_solve();
      }
      int slot = -1;
      double worst = kFeasTol;
      for (int i = 0; i < m; ++i) {
        double v = infeas(i);
        if (dual_bland) {
          // Bland mode: smallest basic variable index among the violated.
          if (v > kFeasTol &&
              (slot == -1 || basic[static_cast<size_t>(i)] <
                                 basic[static_cast<size_t>(slot)]))
            slot = i;
        } else if (v > worst) {
          worst = v;
          slot = i;
        }
      }
      if (slot == -1) {
        // Primal feasible; finish with primal pricing to absorb any drift in
        // the assumed dual feasibility.
        return primal_solve();
      }
      int j_leave = basic[static_cast<size_t>(slot)];
      bool below = xb[static_cast<size_t>(slot)] <
                   lb[static_cast<size_t>(j_leave)] - kFeasTol;

      std::vector<double> cb(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        cb[static_cast<size_t>(i)] =
            cost[static_cast<size_t>(basic[static_cast<size_t>(i)])];
      compute_y(cb);
      const size_t mm = static_cast<size_t>(m);
      const double* rho = &binv[static_cast<size_t>(slot) * mm];

      // Bound-flipping ratio test: walk the eligible breakpoints in dual-step
      // order; candidates whose whole box range is cheaper than the leaving
      // variable's remaining violation flip to their other bound, the first
      // one that can absorb the rest pivots in.
      struct Candidate {
        int j;
        double alpha;
        double ratio;
      };
      std::vector<Candidate> cands;
      for (int j = 0; j < total(); ++j) {
        VStat s = vstat[static_cast<size_t>(j)];
        if (s == kBasic) continue;
        if (ub[static_cast<size_t>(j)] - lb[static_cast<size_t>(j)] < 1e-12)
          continue;  // fixed variables constrain nothing
        double alpha = 0.0;
        for_col(j, [&](int r, double a) { alpha += rho[static_cast<size_t>(r)] * a; });
        if (std::abs(alpha) < kPivTol) continue;
        bool ok = below ? ((s == kAtLower && alpha < 0) ||
                           (s == kAtUpper && alpha > 0) || s == kFreeNB)
                        : ((s == kAtLower && alpha > 0) ||
                           (s == kAtUpper && alpha < 0) || s == kFreeNB);
        if (!ok) continue;
        double rc = cost[static_cast<size_t>(j)] - dot_col(j, y);
        // Clamp toward dual feasibility: tolerance-level violations must not
        // produce a step in the wrong direction.
        if (s == kAtLower)
          rc = std::max(rc, 0.0);
        else if (s == kAtUpper)
          rc = std::min(rc, 0.0);
        else
          rc = 0.0;
        cands.push_back({j, alpha, rc / alpha});
      }
      if (cands.empty()) {
        if (!confirmed && pivots_since_refactor > 0) {
          refactor();
          confirmed = true;
          continue;
        }
        return Status::Infeasible;
      }
      confirmed = false;
      // Dual step moves away from zero: below caps theta <= 0 (largest ratio
      // first), above caps theta >= 0 (smallest first). Bland mode breaks
      // ratio ties by variable index; the default prefers large pivots.
      std::sort(cands.begin(), cands.end(),
                [&](const Candidate& a, const Candidate& b) {
                  double ra = below ? -a.ratio : a.ratio;
                  double rb = below ? -b.ratio : b.ratio;
                  if (std::abs(ra - rb) > 1e-12) return ra < rb;
                  if (dual_bland) return a.j < b.j;
                  return std::abs(a.alpha) > std::abs(b.alpha);
                });

      double violation = below
                             ? lb[static_cast<size_t>(j_leave)] -
                                   xb[static_cast<size_t>(slot)]
                             : xb[static_cast<size_t>(slot)] -
                                   ub[static_cast<size_t>(j_leave)];
      int q = -1;
      double q_ratio = 0.0;
      for (const Candidate& c : cands) {
        double span = ub[static_cast<size_t>(c.j)] - lb[static_cast<size_t>(c.j)];
        double absorb = std::isfinite(span) ? std::abs(c.alpha) * span : kInf;
        if (absorb < violation - kFeasTol) {
          // Flip: the candidate moves across its whole range, the leaving
          // variable's violation shrinks but does not vanish.
          ftran(c.j);
          double step = vstat[static_cast<size_t>(c.j)] == kAtLower ? span : -span;
          for (int i = 0; i < m; ++i)
            xb[static_cast<size_t>(i)] -= d[static_cast<size_t>(i)] * step;
          vstat[static_cast<size_t>(c.j)] =
              vstat[static_cast<size_t>(c.j)] == kAtLower ? kAtUpper : kAtLower;
          violation -= absorb;
          ++iters;
          continue;
        }
        q = c.j;
        q_ratio = c.ratio;
        break;
      }
      if (q == -1) {
        // Every candidate flipped and the violation persists: infeasible.
        return Status::Infeasible;
      }
      dual_degenerate = std::abs(q_ratio) < 1e-10 ? dual_degenerate + 1 : 0;
      if (dual_degenerate > 100 + m / 2) dual_bland = true;
      if (std::abs(q_ratio) > 1e-9) dual_bland = false;

      ftran(q);
      double piv = d[static_cast<size_t>(slot)];
      if (std::abs(piv) < kPivTol) {
        refactor();
        continue;
      }
      double target = below ? lb[static_cast<size_t>(j_leave)]
                            : ub[static_cast<size_t>(j_leave)];
      double delta = (target - xb[static_cast<size_t>(slot)]) / (-piv);
      for (int i = 0; i < m; ++i)
        xb[static_cast<size_t>(i)] -= d[static_cast<size_t>(i)] * delta;
      update_binv_and_pivot(q, slot, nb_value(q) + delta,
                            below ? kAtLower : kAtUpper);
    }
  }

  // ---- incremental edits --------------------------------------------------

  VarId add_column(double vlb, double vub, double vobj,
                   const std::vector<std::pair<RowId, double>>& terms) {
    // Logical variables live in a block after the structurals; appending a
    // structural means renumbering that block, so remap bookkeeping.
    std::vector<std::pair<int, double>> col;
    for (auto [r, a] : terms) {
      if (r < 0 || r >= m) throw BackendFailure("add_column: bad row id");
      if (a != 0.0) col.push_back({r, a});
    }
    int j = nstruct;
    cols.push_back(std::move(col));
    cost.insert(cost.begin() + j, vobj);
    lb.insert(lb.begin() + j, vlb);
    ub.insert(ub.begin() + j, vub);
    VStat stat = vlb > -kInf ? kAtLower : (vub < kInf ? kAtUpper : kFreeNB);
    vstat.insert(vstat.begin() + j, stat);
    row_of.insert(row_of.begin() + j, -1);
    for (int r = 0; r < m; ++r)
      if (basic[static_cast<size_t>(r)] >= j) ++basic[static_cast<size_t>(r)];
    ++nstruct;
    double v = nb_value(j);
    if (v != 0.0) {
      ftran(j);
      for (int i = 0; i < m; ++i)
        xb[static_cast<size_t>(i)] -= d[static_cast<size_t>(i)] * v;
    }
    return j;
  }

  void set_var_bounds(VarId j, double nlb, double nub) {
    if (j < 0 || j >= nstruct) throw BackendFailure("set_var_bounds: bad var");
    if (nlb > nub + 1e-12) throw BackendFailure("set_var_bounds: inverted");
    double old_val = vstat[static_cast<size_t>(j)] == kBasic ? 0.0 : nb_value(j);
    lb[static_cast<size_t>(j)] = nlb;
    ub[static_cast<size_t>(j)] = nub;
    if (vstat[static_cast<size_t>(j)] == kBasic) return;
    // Re-snap the nonbasic value and propagate the change into the basics.
    VStat s = vstat[static_cast<size_t>(j)];
    if (s == kAtLower && nlb == -kInf)
      s = nub < kInf ? kAtUpper : kFreeNB;
    else if (s == kAtUpper && nub == kInf)
      s = nlb > -kInf ? kAtLower : kFreeNB;
    else if (s == kFreeNB && nlb > -kInf)
      s = kAtLower;
    vstat[static_cast<size_t>(j)] = s;
    double new_val = nb_value(j);
    double delta = new_val - old_val;
    if (delta != 0.0) {
      ftran(j);
      for (int i = 0; i < m; ++i)
        xb[static_cast<size_t>(i)] -= d[static_cast<size_t>(i)] * delta;
    }
  }

  std::vector<double> struct_values() const {
    std::vector<double> x(static_cast<size_t>(nstruct));
    for (int j = 0; j < nstruct; ++j)
      x[static_cast<size_t>(j)] =
          vstat[static_cast<size_t>(j)] == kBasic
              ? xb[static_cast<size_t>(row_of[static_cast<size_t>(j)])]
              : nb_value(j);
    return x;
  }

  std::vector<double> row_duals() {
    std::vector<double> cb(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
      cb[static_cast<size_t>(i)] =
          cost[static_cast<size_t>(basic[static_cast<size_t>(i)])];
    compute_y(cb);
    return y;
  }
};

LpEngine::LpEngine(const Model& m) : impl_(std::make_unique<Impl>(m)) {}
LpEngine::~LpEngine() = default;
LpEngine::LpEngine(LpEngine&&) noexcept = default;
LpEngine& LpEngine::operator=(LpEngine&&) noexcept = default;

Status LpEngine::solve() { return impl_->primal_solve(); }
Status LpEngine::reoptimize_dual() { return impl_->dual_solve(); }

VarId LpEngine::add_column(double lb, double ub, double obj,
                           std::vector<std::pair<RowId, double>> terms) {
  return impl_->add_column(lb, ub, obj, terms);
}

void LpEngine::set_var_bounds(VarId j, double lb, double ub) {
  impl_->set_var_bounds(j, lb, ub);
}

double LpEngine::var_lb(VarId j) const { return impl_->lb[static_cast<size_t>(j)]; }
double LpEngine::var_ub(VarId j) const { return impl_->ub[static_cast<size_t>(j)]; }

double LpEngine::objective() const { return impl_->objective_value(); }

double LpEngine::value(VarId j) const {
  return impl_->vstat[static_cast<size_t>(j)] == Impl::kBasic
             ? impl_->xb[static_cast<size_t>(impl_->row_of[static_cast<size_t>(j)])]
             : impl_->nb_value(j);
}

std::vector<double> LpEngine::primal() const { return impl_->struct_values(); }
std::vector<double> LpEngine::duals() const { return impl_->row_duals(); }
long LpEngine::iterations() const { return impl_->iters; }

SolveOutcome solve_lp(const Model& model) {
  LpEngine engine(model);
  SolveOutcome out;
  Status st = engine.solve();
  out.status = st;
  out.iterations = engine.iterations();
  if (st != Status::Optimal) return out;
  out.objective = engine.objective();
  out.primal = engine.primal();
  out.duals = engine.duals();
  out.bound = out.objective;

  // Strong-duality self check on every LP solve. The dual objective of the
  // returned duals is sum_r y_r rhs_r plus the bound contributions
  // rc_j * x_j of nonbasic structurals (basic ones have rc ~ 0); equality
  // with the primal objective encodes complementary slackness on the rows.
  double dual_obj = 0.0;
  for (RowId r = 0; r < model.row_count(); ++r)
    dual_obj += out.duals[static_cast<size_t>(r)] * model.row(r).rhs;
  std::vector<double> ydotcol(static_cast<size_t>(model.var_count()), 0.0);
  for (RowId r = 0; r < model.row_count(); ++r)
    for (auto [j, a] : model.row(r).terms)
      ydotcol[static_cast<size_t>(j)] += out.duals[static_cast<size_t>(r)] * a;
  double primal_obj = 0.0;
  for (VarId j = 0; j < model.var_count(); ++j) {
    double x = out.primal[static_cast<size_t>(j)];
    dual_obj += (model.var(j).obj - ydotcol[static_cast<size_t>(j)]) * x;
    primal_obj += model.var(j).obj * x;
  }
  if (std::abs(primal_obj - dual_obj) > 1e-6 * (1 + std::abs(primal_obj)))
    throw BackendFailure("lp: strong duality check failed");
  return out;
}

}  // namespace vne::mip
