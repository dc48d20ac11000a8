#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace raillp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit, kNumeric };

const char* to_string(SolveStatus s);

// Bounded-variable primal revised simplex for problems of the form
//   maximize c'x   s.t.  A x <= b,  lo <= x <= hi.
// Rows and variables can be appended between solves; re-solving warm-starts
// from the previous basis when it is still primal feasible and otherwise
// falls back to a fresh phase-1 start with artificials. Factorization is a
// dense LU refreshed periodically, with product-form eta updates in between.
class SimplexSolver {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  using Coef = std::pair<int, double>;  // (row id, coefficient) etc.

  // Adds a structural variable, optionally with coefficients in existing
  // rows. Returns the variable id.
  int add_variable(double obj, double lo, double hi,
                   const std::vector<Coef>& row_coefs = {});
  // Adds a `sum coef * x <= rhs` row over existing variables; returns row id.
  int add_row(const std::vector<Coef>& var_coefs, double rhs);

  void set_bounds(int var, double lo, double hi);
  double lower_bound(int var) const { return vars_[var].lo; }
  double upper_bound(int var) const { return vars_[var].hi; }

  SolveStatus solve();

  double objective() const;
  double value(int var) const { return x_[var]; }
  double dual(int row) const { return y_[row]; }
  double reduced_cost(int var) const;
  // y'b plus bound contributions of nonbasic reduced costs; equals the primal
  // objective at an optimum (strong duality check hook).
  double dual_objective() const;

  int num_structural() const { return static_cast<int>(structural_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  double row_activity(int row) const;
  double row_rhs(int row) const { return rows_[row].rhs; }

  // CPLEX-style LP text of the current problem (structural variables only).
  std::string write_lp() const;

 private:
  enum class State : unsigned char { kAtLo, kAtHi, kBasic };

  struct Var {
    double obj = 0.0;
    double lo = 0.0;
    double hi = kInf;
    int slack_row = -1;      // >= 0 for slack/artificial columns
    bool artificial = false;
    std::vector<Coef> col;   // structural column entries (row, coef)
  };
  struct Row {
    double rhs = 0.0;
    int slack_var = -1;
    std::vector<Coef> entries;  // structural entries (var, coef)
  };

  double col_entry_sign(int var) const;  // +1 slack, -1 artificial
  void apply_col(int var, double scale, Eigen::VectorXd& dense) const;
  Eigen::VectorXd ftran(Eigen::VectorXd rhs) const;
  Eigen::VectorXd btran(Eigen::VectorXd y) const;
  void refactorize();
  void compute_basic_values();
  bool basis_feasible() const;
  void reset_to_slack_basis();
  double price_var(int j, const Eigen::VectorXd& y) const;
  SolveStatus primal_loop(const std::vector<double>& costs, bool phase_one);
  void finalize(const std::vector<double>& costs);
  std::vector<double> current_costs() const;

  std::vector<Var> vars_;
  std::vector<Row> rows_;
  std::vector<int> structural_;  // var ids of structural variables in order

  std::vector<int> basis_;            // basic var per row position
  std::vector<State> state_;          // per var
  std::vector<double> x_;             // primal values (all vars)
  std::vector<double> y_;             // row duals
  std::vector<double> d_;             // reduced costs (last costs used)
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<std::pair<int, Eigen::VectorXd>> etas_;
  bool factor_valid_ = false;
  bool have_basis_ = false;
  int bland_countdown_ = 0;
};

// One-shot problem description and facade.
struct LpProblem {
  struct Variable {
    double obj = 0.0;
    double lo = 0.0;
    double hi = SimplexSolver::kInf;
    std::vector<SimplexSolver::Coef> entries;  // (row, coef)
  };
  std::vector<Variable> vars;
  std::vector<double> row_rhs;
};

struct LpSolution {
  SolveStatus status = SolveStatus::kNumeric;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

LpSolution solve_lp(const LpProblem& p);

}  // namespace raillp
