#include "raillp/lp_backend.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "raillp/types.hpp"

namespace raillp {

namespace {
constexpr double kDualTol = 1e-7;    // entering-candidate threshold
constexpr double kRatioTol = 1e-9;   // pivot element floor
constexpr double kBoundTol = 1e-7;   // primal bound violation slack
constexpr int kRefactorEvery = 64;
constexpr int kMaxPivots = 500000;
constexpr int kDegenerateLimit = 1000;  // pivots before Bland's rule
}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterLimit: return "iteration_limit";
    case SolveStatus::kNumeric: return "numeric_failure";
  }
  return "?";
}

int SimplexSolver::add_variable(double obj, double lo, double hi,
                                const std::vector<Coef>& row_coefs) {
  if (!(lo > -kInf)) throw RaillpError("variables need a finite lower bound");
  if (hi < lo) throw RaillpError("variable bounds crossed");
  int id = static_cast<int>(vars_.size());
  Var v;
  v.obj = obj;
  v.lo = lo;
  v.hi = hi;
  v.col = row_coefs;
  vars_.push_back(std::move(v));
  structural_.push_back(id);
  for (const auto& [r, c] : row_coefs) rows_[r].entries.push_back({id, c});
  state_.push_back(State::kAtLo);
  x_.push_back(lo);
  return id;
}

int SimplexSolver::add_row(const std::vector<Coef>& var_coefs, double rhs) {
  int row = static_cast<int>(rows_.size());
  Row r;
  r.rhs = rhs;
  r.entries = var_coefs;
  for (const auto& [v, c] : var_coefs) vars_[v].col.push_back({row, c});

  int slack = static_cast<int>(vars_.size());
  Var sv;
  sv.slack_row = row;
  vars_.push_back(std::move(sv));
  state_.push_back(State::kAtLo);
  x_.push_back(0.0);
  r.slack_var = slack;
  rows_.push_back(std::move(r));
  y_.push_back(0.0);

  if (have_basis_) {
    // The new slack joins the basis; its value is set by the next
    // compute_basic_values(). The factorization must grow.
    basis_.push_back(slack);
    state_[slack] = State::kBasic;
    factor_valid_ = false;
  }
  return row;
}

void SimplexSolver::set_bounds(int var, double lo, double hi) {
  if (!(lo > -kInf)) throw RaillpError("variables need a finite lower bound");
  if (hi < lo) throw RaillpError("variable bounds crossed");
  vars_[var].lo = lo;
  vars_[var].hi = hi;
  if (state_[var] == State::kAtLo) {
    x_[var] = lo;
  } else if (state_[var] == State::kAtHi) {
    x_[var] = std::isfinite(hi) ? hi : lo;
    if (!std::isfinite(hi)) state_[var] = State::kAtLo;
  }
}

double SimplexSolver::col_entry_sign(int var) const {
  return vars_[var].artificial ? -1.0 : 1.0;
}

void SimplexSolver::apply_col(int var, double scale,
                              Eigen::VectorXd& dense) const {
  const Var& v = vars_[var];
  if (v.slack_row >= 0) {
    dense[v.slack_row] += col_entry_sign(var) * scale;
  } else {
    for (const auto& [r, c] : v.col) dense[r] += c * scale;
  }
}

Eigen::VectorXd SimplexSolver::ftran(Eigen::VectorXd rhs) const {
  Eigen::VectorXd z = lu_.solve(rhs);
  for (const auto& [p, w] : etas_) {
    double zp = z[p] / w[p];
    z -= zp * w;
    z[p] = zp;
  }
  return z;
}

Eigen::VectorXd SimplexSolver::btran(Eigen::VectorXd y) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const auto& [p, w] = *it;
    double s = w.dot(y) - w[p] * y[p];
    y[p] = (y[p] - s) / w[p];
  }
  return lu_.transpose().solve(y);
}

void SimplexSolver::refactorize() {
  const int m = num_rows();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const Var& v = vars_[basis_[i]];
    if (v.slack_row >= 0) {
      B(v.slack_row, i) = col_entry_sign(basis_[i]);
    } else {
      for (const auto& [r, c] : v.col) B(r, i) = c;
    }
  }
  lu_.compute(B);
  etas_.clear();
  factor_valid_ = true;
}

void SimplexSolver::compute_basic_values() {
  const int m = num_rows();
  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) r[i] = rows_[i].rhs;
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    if (state_[j] == State::kBasic) continue;
    double xv = state_[j] == State::kAtHi ? vars_[j].hi : vars_[j].lo;
    x_[j] = xv;
    if (xv != 0.0) apply_col(j, -xv, r);
  }
  Eigen::VectorXd xb = ftran(std::move(r));
  for (int i = 0; i < m; ++i) x_[basis_[i]] = xb[i];
}

bool SimplexSolver::basis_feasible() const {
  for (int i = 0; i < num_rows(); ++i) {
    const Var& v = vars_[basis_[i]];
    double xv = x_[basis_[i]];
    if (xv < v.lo - kBoundTol || xv > v.hi + kBoundTol) return false;
  }
  return true;
}

void SimplexSolver::reset_to_slack_basis() {
  basis_.clear();
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    state_[j] = State::kAtLo;
    x_[j] = vars_[j].lo;
  }
  for (int i = 0; i < num_rows(); ++i) {
    int s = rows_[i].slack_var;
    basis_.push_back(s);
    state_[s] = State::kBasic;
  }
  have_basis_ = true;
  factor_valid_ = false;
}

double SimplexSolver::price_var(int j, const Eigen::VectorXd& y) const {
  const Var& v = vars_[j];
  double dot;
  if (v.slack_row >= 0) {
    dot = col_entry_sign(j) * y[v.slack_row];
  } else {
    dot = 0.0;
    for (const auto& [r, c] : v.col) dot += c * y[r];
  }
  return -dot;  // caller adds the cost coefficient
}

SolveStatus SimplexSolver::primal_loop(const std::vector<double>& costs,
                                       bool phase_one) {
  const int m = num_rows();
  int consecutive_degenerate = 0;
  bool bland = false;

  for (int iter = 0; iter < kMaxPivots; ++iter) {
    if (phase_one) {
      double infeas = 0.0;
      for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
        if (vars_[j].artificial) infeas += x_[j];
      }
      if (infeas <= tol::kFeasibility) return SolveStatus::kOptimal;
    }

    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = costs[basis_[i]];
    Eigen::VectorXd y = btran(std::move(cb));

    int enter = -1;
    double best = 0.0;
    for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
      if (state_[j] == State::kBasic) continue;
      const Var& v = vars_[j];
      if (v.hi - v.lo < 1e-30) continue;  // pinned
      double d = costs[j] + price_var(j, y);
      bool eligible = (state_[j] == State::kAtLo && d > kDualTol) ||
                      (state_[j] == State::kAtHi && d < -kDualTol);
      if (!eligible) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (std::fabs(d) > best) {
        best = std::fabs(d);
        enter = j;
      }
    }
    if (enter == -1) return SolveStatus::kOptimal;

    double sigma = state_[enter] == State::kAtLo ? 1.0 : -1.0;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    apply_col(enter, 1.0, a);
    Eigen::VectorXd w = ftran(std::move(a));

    double theta = vars_[enter].hi - vars_[enter].lo;  // own-bound flip
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      double wt = sigma * w[i];
      int bi = basis_[i];
      double cand;
      if (wt > kRatioTol) {
        if (!(vars_[bi].lo > -kInf)) continue;
        cand = (x_[bi] - vars_[bi].lo) / wt;
      } else if (wt < -kRatioTol) {
        if (!std::isfinite(vars_[bi].hi)) continue;
        cand = (x_[bi] - vars_[bi].hi) / wt;
      } else {
        continue;
      }
      if (cand < 0.0) cand = 0.0;
      bool take = cand < theta - 1e-12;
      if (!take && blocker >= 0 && cand < theta + 1e-12 && bland &&
          bi < basis_[blocker]) {
        take = true;  // Bland tie-break on the leaving variable
      }
      if (take) {
        theta = cand;
        blocker = i;
      }
    }
    if (!std::isfinite(theta)) return SolveStatus::kUnbounded;

    // Apply the step.
    x_[enter] += sigma * theta;
    if (theta != 0.0) {
      for (int i = 0; i < m; ++i) x_[basis_[i]] -= sigma * theta * w[i];
    }
    if (blocker == -1) {
      state_[enter] =
          state_[enter] == State::kAtLo ? State::kAtHi : State::kAtLo;
      x_[enter] = state_[enter] == State::kAtHi ? vars_[enter].hi
                                                : vars_[enter].lo;
    } else {
      int leaving = basis_[blocker];
      double wt = sigma * w[blocker];
      x_[leaving] = wt > 0 ? vars_[leaving].lo : vars_[leaving].hi;
      state_[leaving] = wt > 0 ? State::kAtLo : State::kAtHi;
      basis_[blocker] = enter;
      state_[enter] = State::kBasic;
      if (std::fabs(w[blocker]) < kRatioTol) {
        refactorize();
        compute_basic_values();
      } else {
        etas_.push_back({blocker, std::move(w)});
        if (static_cast<int>(etas_.size()) >= kRefactorEvery) {
          refactorize();
          compute_basic_values();
        }
      }
    }

    if (theta <= 1e-12) {
      if (++consecutive_degenerate >= kDegenerateLimit) bland = true;
    } else {
      consecutive_degenerate = 0;
      bland = false;
    }
  }
  return SolveStatus::kIterLimit;
}

std::vector<double> SimplexSolver::current_costs() const {
  std::vector<double> costs(vars_.size(), 0.0);
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    costs[j] = vars_[j].obj;
  }
  return costs;
}

void SimplexSolver::finalize(const std::vector<double>& costs) {
  const int m = num_rows();
  Eigen::VectorXd cb(m);
  for (int i = 0; i < m; ++i) cb[i] = costs[basis_[i]];
  Eigen::VectorXd y = btran(std::move(cb));
  y_.assign(m, 0.0);
  for (int i = 0; i < m; ++i) y_[i] = y[i];
  d_.assign(vars_.size(), 0.0);
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    d_[j] = state_[j] == State::kBasic ? 0.0 : costs[j] + price_var(j, y);
  }
}

SolveStatus SimplexSolver::solve() {
  if (rows_.empty() && vars_.empty()) return SolveStatus::kOptimal;

  if (!have_basis_) reset_to_slack_basis();
  if (!factor_valid_) refactorize();
  compute_basic_values();

  if (!basis_feasible()) {
    // Warm basis lost feasibility (bound changes): restart from slacks and
    // clean out earlier artificials.
    reset_to_slack_basis();
    refactorize();
    compute_basic_values();
  }

  if (!basis_feasible()) {
    // Slack basis infeasible: slacks below zero on violated rows. Install
    // one artificial (column -e_i) per violated row and drive their sum to
    // zero with phase-1 costs.
    std::vector<int> violated;
    for (int i = 0; i < num_rows(); ++i) {
      if (x_[rows_[i].slack_var] < -kBoundTol) violated.push_back(i);
    }
    for (int i : violated) {
      int id = static_cast<int>(vars_.size());
      Var av;
      av.slack_row = i;
      av.artificial = true;
      vars_.push_back(std::move(av));
      state_.push_back(State::kBasic);
      x_.push_back(0.0);
      int slack = rows_[i].slack_var;
      state_[slack] = State::kAtLo;
      x_[slack] = 0.0;
      basis_[i] = id;
    }
    refactorize();
    compute_basic_values();

    std::vector<double> p1(vars_.size(), 0.0);
    for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
      if (vars_[j].artificial) p1[j] = -1.0;
    }
    SolveStatus st = primal_loop(p1, true);
    if (st == SolveStatus::kIterLimit || st == SolveStatus::kUnbounded) {
      return st;
    }
    double infeas = 0.0;
    for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
      if (vars_[j].artificial) infeas += x_[j];
    }
    if (infeas > tol::kFeasibility) {
      finalize(p1);
      return SolveStatus::kInfeasible;
    }
    for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
      if (vars_[j].artificial) {
        vars_[j].lo = 0.0;
        vars_[j].hi = 0.0;
        if (state_[j] != State::kBasic) x_[j] = 0.0;
      }
    }
  }

  std::vector<double> costs = current_costs();
  SolveStatus st = primal_loop(costs, false);
  finalize(costs);
  return st;
}

double SimplexSolver::objective() const {
  double obj = 0.0;
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    obj += vars_[j].obj * x_[j];
  }
  return obj;
}

double SimplexSolver::reduced_cost(int var) const { return d_[var]; }

double SimplexSolver::dual_objective() const {
  double obj = 0.0;
  for (int i = 0; i < num_rows(); ++i) obj += y_[i] * rows_[i].rhs;
  for (int j = 0; j < static_cast<int>(vars_.size()); ++j) {
    if (state_[j] == State::kBasic) continue;
    double xv = state_[j] == State::kAtHi ? vars_[j].hi : vars_[j].lo;
    if (xv != 0.0) obj += d_[j] * xv;
  }
  return obj;
}

double SimplexSolver::row_activity(int row) const {
  return rows_[row].rhs - x_[rows_[row].slack_var];
}

std::string SimplexSolver::write_lp() const {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "\\ exported linear program\nMaximize\n obj:";
  bool any = false;
  for (int j : structural_) {
    if (vars_[j].obj == 0.0) continue;
    os << (vars_[j].obj >= 0 && any ? " +" : " ") << num(vars_[j].obj) << " x"
       << j;
    any = true;
  }
  if (!any) os << " 0 x0";
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    os << " r" << i << ":";
    for (const auto& [v, c] : rows_[i].entries) {
      os << (c >= 0 ? " +" : " ") << num(c) << " x" << v;
    }
    os << " <= " << num(rows_[i].rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j : structural_) {
    if (std::isfinite(vars_[j].hi)) {
      os << " " << num(vars_[j].lo) << " <= x" << j << " <= "
         << num(vars_[j].hi) << "\n";
    } else {
      os << " x" << j << " >= " << num(vars_[j].lo) << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

LpSolution solve_lp(const LpProblem& p) {
  SimplexSolver s;
  for (double rhs : p.row_rhs) s.add_row({}, rhs);
  std::vector<int> ids;
  for (const auto& v : p.vars) ids.push_back(s.add_variable(v.obj, v.lo, v.hi, v.entries));
  LpSolution out;
  out.status = s.solve();
  out.objective = s.objective();
  for (int id : ids) out.x.push_back(s.value(id));
  for (int i = 0; i < static_cast<int>(p.row_rhs.size()); ++i) {
    out.y.push_back(s.dual(i));
  }
  return out;
}

}  // namespace raillp
