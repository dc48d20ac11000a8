#pragma once

#include <string>
#include <vector>

#include "raillp/colgen.hpp"
#include "raillp/master.hpp"

namespace raillp {

struct SolvedFlow {
  int demand = -1;
  std::vector<int> arcs;
  int minutes = 0;
  double qty = 0.0;
};

struct IntegerSolution {
  std::string method;  // "diving" | "pnb"
  SolveStatus status = SolveStatus::kOptimal;
  double objective = 0.0;
  double bound = 0.0;   // LP upper bound from the root
  double gap_pct = 0.0;
  bool proven_optimal = false;    // pnb finished its tree within the limit
  bool zero_plan_fallback = false;
  std::vector<long long> frequency;  // per line
  std::vector<SolvedFlow> flows;
  // trace-only counters
  int rounds = 0;      // diving fixes or branch-and-bound nodes
  int colgen_iterations = 0;
};

// 100 * (bound - value) / bound with the conventions: bound ~ 0 gives 0 when
// the value is also ~ 0; a positive bound with value ~ 0 gives 100; a value
// above the bound beyond tolerance throws (internal error).
double gap_percent(double value, double bound);

// Diving: repeatedly fix the fractional frequency variable whose value is
// closest to a nonzero integer (ties: larger value, then smaller variable
// id), rerun early-stop column generation on the reduced network, and fall
// back nearest -> floor -> largest feasible value when a fix is infeasible.
// `master` must be solved to the exact LP optimum already; `root_bound` is
// that objective. The master is consumed (fixes stay applied).
IntegerSolution dive(Master& master, const PricingProblem& pricing,
                     const ColgenConfig& colgen_cfg,
                     const HeuristicConfig& cfg, double root_bound);

// Price-and-branch: branch-and-bound on the frequency variables over the
// frozen root column set (no pricing in the tree). Most-fractional
// branching, depth-first with the better-bound child first.
IntegerSolution price_and_branch(Master& master, const HeuristicConfig& cfg,
                                 double root_bound);

}  // namespace raillp
