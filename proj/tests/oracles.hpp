#pragma once
// Independent reference implementations used to cross-check the solver:
// a dense-tableau LP solver, exhaustive path enumeration over the routing
// graph, and a brute-force integer optimizer over frequency vectors.
// These are deliberately written with different algorithms and data layouts
// than the library under test so that a shared bug is unlikely.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "raillp/cgn.hpp"
#include "raillp/line_pool.hpp"
#include "raillp/master.hpp"
#include "raillp/params.hpp"
#include "raillp/physical_model.hpp"

namespace raillp::testor {

// ---------------------------------------------------------------------------
// Dense LP oracle: maximize c'x subject to A x <= b, x >= 0, where every
// b_i >= 0 so the slack basis is immediately feasible (no phase 1).
// ---------------------------------------------------------------------------
struct DenseLp {
  int nvars = 0;
  std::vector<double> obj;                  // size nvars
  std::vector<std::vector<double>> rows;    // each dense, size nvars
  std::vector<double> rhs;                  // one per row, must be >= 0

  int add_var(double objective_coef);
  void add_row(const std::vector<std::pair<int, double>>& coefs, double bound);
};

struct DenseLpResult {
  bool optimal = false;  // false means unbounded (infeasible cannot happen)
  double objective = 0.0;
  std::vector<double> x;
};

DenseLpResult solve_dense_lp(const DenseLp& lp);

// ---------------------------------------------------------------------------
// Exhaustive path enumeration.
// ---------------------------------------------------------------------------
struct EnumPath {
  std::vector<int> arcs;  // arc ids in walk order
  int minutes = 0;        // counted duration, same convention as the library
};

// Every node-simple walk from the demand's source to one of its sink nodes
// over arcs the demand may use, with counted duration within the demand's
// threshold (+1e-9 slack). A walk is recorded at every sink visit and then
// extended further, so a walk passing through one sink on the way to another
// contributes both prefixes. Throws when more than `cap` paths exist.
std::vector<EnumPath> enumerate_paths(const ChangeGoNetwork& cgn,
                                      const RoutedDemand& demand,
                                      const LineMask* mask = nullptr,
                                      std::size_t cap = 200000);

// Paths for every demand (empty vector for unservable ones).
std::vector<std::vector<EnumPath>> enumerate_all_paths(
    const ChangeGoNetwork& cgn, const std::vector<RoutedDemand>& demands,
    const LineMask* mask = nullptr, std::size_t cap_per_demand = 200000);

// Sum of the matching-kind capacity duals over the path's travel arcs.
double path_dual_cost(const ChangeGoNetwork& cgn, const DualPrices& duals,
                      DemandKind kind, const std::vector<int>& arcs);

// ---------------------------------------------------------------------------
// Frequency-variable structure, re-derived from scratch.
// ---------------------------------------------------------------------------
struct FreqModel {
  std::vector<std::vector<int>> var_lines;  // var -> member line ids
  std::vector<int> var_of_line;             // line id -> var
  std::vector<double> cost;                 // per var: summed member costs
  std::vector<double> cap;                  // per var: upper bound
  struct ThroughputRow {
    std::vector<std::pair<int, double>> coefs;  // (var, coefficient)
    double rhs = 0.0;
  };
  std::vector<ThroughputRow> throughput;
};

FreqModel derive_freq_model(const PhysicalNetwork& net, const LinePool& pool,
                            PlanPolicy plan, const ModelParams& params);

// ---------------------------------------------------------------------------
// Full-enumeration LP and brute-force integer optimum.
// ---------------------------------------------------------------------------
// LP over every enumerated path with continuous frequencies in [0, cap];
// the objective value is the maximum profit.
DenseLpResult solve_full_lp(const PhysicalNetwork& net, const LinePool& pool,
                            const ChangeGoNetwork& cgn,
                            const std::vector<RoutedDemand>& demands,
                            PlanPolicy plan, const ModelParams& params,
                            const std::vector<std::vector<EnumPath>>& paths);

// Maximum profit with the frequency vector fixed (flows re-optimized).
double fixed_frequency_profit(const ChangeGoNetwork& cgn,
                              const std::vector<RoutedDemand>& demands,
                              const FreqModel& fm,
                              const std::vector<long long>& freq,
                              const std::vector<std::vector<EnumPath>>& paths);

struct BruteForceResult {
  double objective = 0.0;       // the zero plan is always available
  std::vector<long long> freq;  // per frequency variable
};

// Exhaustive search over every integer frequency vector within the caps that
// satisfies all throughput rows; flows come from the oracle LP.
BruteForceResult brute_force_optimum(
    const PhysicalNetwork& net, const LinePool& pool,
    const ChangeGoNetwork& cgn, const std::vector<RoutedDemand>& demands,
    PlanPolicy plan, const ModelParams& params,
    const std::vector<std::vector<EnumPath>>& paths);

}  // namespace raillp::testor
