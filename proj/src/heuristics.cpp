#include "raillp/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace raillp {

namespace {

using Clock = std::chrono::steady_clock;

long long nearest_nonzero_integer(double x) {
  long long n = std::llround(x);
  return n < 1 ? 1 : n;
}

bool is_integral(double x) {
  return std::fabs(x - std::llround(x)) <= tol::kIntegrality;
}

// Collects the integer plan out of a solved master.
void harvest(const Master& master, IntegerSolution& sol) {
  sol.frequency.assign(master.total_lines(), 0);
  for (int v = 0; v < master.num_frequency_vars(); ++v) {
    for (int line : master.frequency_var_lines(v)) {
      sol.frequency[line] = std::llround(master.line_frequency(line));
    }
  }
  sol.flows.clear();
  for (int c = 0; c < static_cast<int>(master.columns().size()); ++c) {
    double qty = master.column_value(c);
    if (qty <= 1e-9) continue;
    const Column& col = master.columns()[c];
    SolvedFlow f;
    f.demand = col.demand;
    f.arcs = col.arcs;
    f.minutes = col.minutes;
    f.qty = qty;
    sol.flows.push_back(std::move(f));
  }
  sol.objective = master.objective();
}

// Residual-throughput mask: lines fixed to zero disappear; unfixed lines
// whose route touches a (track, period) pair with no remaining throughput
// can never run, so pricing stops visiting them. Lines fixed positive stay.
LineMask build_reduction_mask(const Master& master, const PhysicalNetwork& net,
                              const LinePool& pool,
                              const std::vector<char>& fixed,
                              const ModelParams& params) {
  const int n_periods = static_cast<int>(net.periods.size());
  const int n_tracks = static_cast<int>(net.tracks.size());
  // Residual cap per (track, period) after fixed frequencies.
  std::vector<double> residual(n_tracks * n_periods);
  for (int e = 0; e < n_tracks; ++e) {
    for (int t = 0; t < n_periods; ++t) {
      residual[e * n_periods + t] =
          params.throughput_per_hour * net.periods[t].hours();
    }
  }
  for (int v = 0; v < master.num_frequency_vars(); ++v) {
    if (!fixed[v]) continue;
    double val = master.frequency_bounds(v).first;
    if (val <= 0.0) continue;
    for (int line : master.frequency_var_lines(v)) {
      const Line& l = pool.lines[line];
      for (int e : pool.routes[l.route].tracks) {
        residual[e * n_periods + l.period] -= val;
      }
    }
  }

  LineMask mask;
  mask.removed.assign(pool.lines.size(), 0);
  for (int v = 0; v < master.num_frequency_vars(); ++v) {
    auto [lo, hi] = master.frequency_bounds(v);
    bool fixed_zero = fixed[v] && hi <= 0.0;
    for (int line : master.frequency_var_lines(v)) {
      if (fixed_zero) {
        mask.removed[line] = 1;
        continue;
      }
      if (fixed[v]) continue;  // fixed positive: keep
      const Line& l = pool.lines[line];
      for (int e : pool.routes[l.route].tracks) {
        if (residual[e * n_periods + l.period] <= 1e-9) {
          // This line can no longer receive frequency; drop every line of
          // the variable (a shared PE variable is forced to zero).
          for (int sib : master.frequency_var_lines(v)) {
            mask.removed[sib] = 1;
          }
          break;
        }
      }
      if (mask.removed[line]) break;
    }
  }
  return mask;
}

}  // namespace

double gap_percent(double value, double bound) {
  if (value > bound + tol::kObjective) {
    throw RaillpError("gap: incumbent value exceeds the upper bound");
  }
  if (std::fabs(bound) <= tol::kObjective) return 0.0;
  double g = 100.0 * (bound - value) / bound;
  if (g < 0.0) g = 0.0;
  if (g > 100.0) g = 100.0;
  return g;
}

IntegerSolution dive(Master& master, const PricingProblem& pricing,
                     const ColgenConfig& colgen_cfg, const HeuristicConfig& cfg,
                     double root_bound) {
  IntegerSolution sol;
  sol.method = "diving";
  sol.bound = root_bound;

  ColgenConfig inner = colgen_cfg;
  inner.early_stop = true;
  inner.time_limit_sec = 0.0;

  LineMask mask;
  mask.removed.assign(pricing.cgn->line_nodes.size(), 0);
  PricingProblem reduced = pricing;
  reduced.mask = &mask;
  reduced.elementary_cutoff_nodes = cfg.elementary_cutoff_nodes;

  std::vector<char> fixed(master.num_frequency_vars(), 0);

  for (;;) {
    // Pick the unfixed fractional variable closest to a nonzero integer.
    int pick = -1;
    double pick_dist = 0.0;
    double pick_val = 0.0;
    for (int v = 0; v < master.num_frequency_vars(); ++v) {
      if (fixed[v]) continue;
      double x = master.lp_value_of_frequency_var(v);
      if (is_integral(x)) continue;
      double dist = std::fabs(x - nearest_nonzero_integer(x));
      bool better = pick == -1 || dist < pick_dist - 1e-12 ||
                    (dist < pick_dist + 1e-12 &&
                     (x > pick_val + 1e-12 ||
                      (std::fabs(x - pick_val) <= 1e-12 && v < pick)));
      if (better) {
        pick = v;
        pick_dist = dist;
        pick_val = x;
      }
    }

    if (pick == -1) {
      // All unfixed variables are integral: pin them and finish.
      for (int v = 0; v < master.num_frequency_vars(); ++v) {
        if (fixed[v]) continue;
        double x = master.lp_value_of_frequency_var(v);
        long long r = std::llround(x);
        master.set_frequency_bounds(v, r, r);
        fixed[v] = 1;
      }
      break;
    }

    // Fixing ladder: nearest nonzero integer, floor, then downward to the
    // largest feasible value (zero always succeeds).
    double x = master.lp_value_of_frequency_var(pick);
    std::vector<long long> ladder;
    long long nearest = nearest_nonzero_integer(x);
    long long fl = static_cast<long long>(std::floor(x));
    ladder.push_back(nearest);
    for (long long v = fl; v >= 0; --v) {
      if (v != nearest) ladder.push_back(v);
    }
    bool fixed_ok = false;
    for (long long candidate : ladder) {
      if (candidate > master.frequency_cap(pick) + 1e-9) continue;
      master.set_frequency_bounds(pick, candidate, candidate);
      SolveStatus st = master.solve();
      if (st == SolveStatus::kOptimal) {
        fixed_ok = true;
        break;
      }
    }
    if (!fixed_ok) {
      // Unreachable in principle (zero is always feasible); bail out safely.
      master.set_frequency_bounds(pick, 0, 0);
      master.solve();
    }
    fixed[pick] = 1;
    sol.rounds += 1;

    mask = build_reduction_mask(master, master.network(), master.pool(), fixed,
                                master.params());
    ColgenResult cg = run_colgen(master, reduced, inner);
    sol.colgen_iterations += cg.iterations;
  }

  // Final flow re-optimization with every frequency pinned; pricing may
  // still add columns for the chosen lines.
  mask = build_reduction_mask(master, master.network(), master.pool(), fixed,
                              master.params());
  ColgenResult cg = run_colgen(master, reduced, inner);
  sol.colgen_iterations += cg.iterations;
  sol.status = cg.status;

  harvest(master, sol);
  sol.gap_pct = gap_percent(sol.objective, sol.bound);
  bool any = false;
  for (long long f : sol.frequency) any = any || f > 0;
  sol.zero_plan_fallback = !any && sol.objective <= tol::kObjective;
  return sol;
}

IntegerSolution price_and_branch(Master& master, const HeuristicConfig& cfg,
                                 double root_bound) {
  IntegerSolution sol;
  sol.method = "pnb";
  sol.bound = root_bound;

  auto t0 = Clock::now();
  auto out_of_time = [&]() {
    if (cfg.time_limit_sec <= 0.0) return false;
    double sec = std::chrono::duration<double>(Clock::now() - t0).count();
    return sec > cfg.time_limit_sec;
  };

  const int nv = master.num_frequency_vars();
  using Bounds = std::vector<std::pair<double, double>>;
  Bounds root(nv);
  for (int v = 0; v < nv; ++v) root[v] = master.frequency_bounds(v);

  auto apply = [&](const Bounds& b) {
    for (int v = 0; v < nv; ++v) {
      master.set_frequency_bounds(v, b[v].first, b[v].second);
    }
  };

  bool have_incumbent = false;
  double incumbent_obj = 0.0;
  IntegerSolution incumbent;
  bool proven = true;

  // Depth-first with the better-bound child explored first; children are
  // evaluated eagerly so pruning sees tight bounds.
  struct Node {
    Bounds bounds;
    double bound_est = 0.0;
  };
  std::vector<Node> stack;
  stack.push_back({root, root_bound});

  while (!stack.empty()) {
    if (out_of_time()) {
      proven = false;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (have_incumbent && node.bound_est <= incumbent_obj + tol::kObjective) {
      continue;  // pruned since creation
    }
    apply(node.bounds);
    SolveStatus st = master.solve();
    sol.rounds += 1;
    if (st == SolveStatus::kInfeasible) continue;
    if (st != SolveStatus::kOptimal) {
      proven = false;
      continue;
    }
    double obj = master.objective();
    if (have_incumbent && obj <= incumbent_obj + tol::kObjective) continue;

    // Most fractional frequency variable.
    int pick = -1;
    double pick_score = -1.0;
    for (int v = 0; v < nv; ++v) {
      double x = master.lp_value_of_frequency_var(v);
      double frac = x - std::floor(x);
      double score = std::min(frac, 1.0 - frac);
      if (score > tol::kIntegrality && score > pick_score + 1e-12) {
        pick_score = score;
        pick = v;
      }
    }
    if (pick == -1) {
      // Integral: new incumbent.
      have_incumbent = true;
      incumbent_obj = obj;
      harvest(master, incumbent);
      continue;
    }

    double x = master.lp_value_of_frequency_var(pick);
    Bounds down = node.bounds;
    down[pick].second = std::floor(x);
    Bounds up = node.bounds;
    up[pick].first = std::ceil(x);

    // Eager child bounds.
    auto eval = [&](const Bounds& b) {
      apply(b);
      SolveStatus s = master.solve();
      if (s == SolveStatus::kInfeasible) {
        return -std::numeric_limits<double>::infinity();
      }
      if (s != SolveStatus::kOptimal) proven = false;
      return master.objective();
    };
    double bd = eval(down);
    double bu = eval(up);
    // Push the worse child first so the better one is explored next.
    auto push_if_open = [&](Bounds&& b, double est) {
      if (!std::isfinite(est)) return;
      if (have_incumbent && est <= incumbent_obj + tol::kObjective) return;
      stack.push_back({std::move(b), est});
    };
    if (bd <= bu) {
      push_if_open(std::move(down), bd);
      push_if_open(std::move(up), bu);
    } else {
      push_if_open(std::move(up), bu);
      push_if_open(std::move(down), bd);
    }
  }

  if (have_incumbent) {
    sol.objective = incumbent.objective;
    sol.frequency = std::move(incumbent.frequency);
    sol.flows = std::move(incumbent.flows);
    sol.status = SolveStatus::kOptimal;
    sol.proven_optimal = proven && stack.empty();
  } else {
    // No incumbent inside the limit: fall back to the empty plan.
    sol.frequency.assign(master.total_lines(), 0);
    sol.flows.clear();
    sol.objective = 0.0;
    sol.zero_plan_fallback = true;
    sol.status = SolveStatus::kOptimal;
    sol.proven_optimal = false;
  }
  sol.gap_pct = gap_percent(sol.objective, sol.bound);
  return sol;
}

}  // namespace raillp
