#pragma once

#include <map>
#include <string>
#include <vector>

#include "raillp/cgn.hpp"
#include "raillp/heuristics.hpp"
#include "raillp/line_pool.hpp"

namespace raillp {

struct MetricsReport {
  double objective = 0.0;
  double bound = 0.0;
  double gap_pct = 0.0;
  bool proven_optimal = false;
  bool zero_plan = false;

  double sl_pax = 0.0;       // % of passenger units served
  std::vector<double> sl_pax_by_period;
  double sl_freight = 0.0;

  double tt_pax_h = 0.0;     // flow-weighted mean travel time; NaN if no flow
  double tt_freight_h = 0.0;

  double util_pax = 0.0;     // unweighted mean over qualifying travel arcs
  double util_pax_weighted = 0.0;  // frequency-weighted
  std::vector<double> util_pax_by_period;
  double util_freight = 0.0;
  double util_freight_weighted = 0.0;

  int lines_installed = 0;
  long long total_frequency = 0;
  std::map<std::string, double> mode_share;  // mode id -> % of frequency

  double revenue_pax = 0.0;
  double revenue_freight = 0.0;
  double line_cost = 0.0;
};

// Independent feasibility audit of an integer solution against the raw
// instance data: demand caps, per-arc capacities, track throughput,
// integrality/nonnegativity, path admissibility of every flow, and (under
// the period-equal plan) equal frequencies across periods. Returns all
// violations found.
std::vector<Violation> check_solution(const PhysicalNetwork& net,
                                      const LinePool& pool,
                                      const ChangeGoNetwork& cgn,
                                      const std::vector<RoutedDemand>& demands,
                                      const IntegerSolution& sol,
                                      PlanPolicy plan);

// Computes the report; throws RaillpError naming the violated constraint if
// the solution fails the feasibility audit. Also recomputes profit from
// flows and frequencies and checks it against sol.objective.
MetricsReport compute_metrics(const PhysicalNetwork& net, const LinePool& pool,
                              const ChangeGoNetwork& cgn,
                              const std::vector<RoutedDemand>& demands,
                              const IntegerSolution& sol, PlanPolicy plan);

// 100 * (variant.objective - base.objective) / base.objective; throws
// RaillpError("undefined baseline") when base.objective <= 0.
double profit_improvement(const MetricsReport& base,
                          const MetricsReport& variant);

// CSV emission. One row per solved case; `ratio` < 0 prints as "-".
// Undefined values (no served flow, no open capacity) print as "n/a";
// per-period and mode-share vectors are ";"-joined inside one cell.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& instance,
                            const std::string& scenario,
                            const std::string& plan, const std::string& method,
                            double ratio, const MetricsReport& m);

// Human-readable multi-line summary for `report`.
std::string metrics_text(const MetricsReport& m);

}  // namespace raillp
