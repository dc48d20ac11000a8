#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "raillp/colgen.hpp"
#include "raillp/heuristics.hpp"
#include "raillp/instance_gen.hpp"
#include "raillp/reporting.hpp"

namespace raillp {

enum class Scenario { kP, kPF, kPFM };

const char* to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& s);
const char* to_string(PlanPolicy p);
std::optional<PlanPolicy> parse_plan(const std::string& s);

// Mode set for a scenario: passenger (800/0), + freight (0/800),
// + mixed (400/400), capacities in demand units per unit frequency.
std::vector<Mode> scenario_modes(Scenario s);

// Demands visible under the scenario (P drops freight records).
std::vector<DemandEntry> scenario_demands(const Instance& inst, Scenario s);

// Everything derived from an instance that solving needs. The pool/cgn/
// demand objects must outlive any Master built on them.
struct SolveContext {
  Instance instance;
  Scenario scenario = Scenario::kPFM;
  ModelParams params;
  LinePool pool;
  ChangeGoNetwork cgn;
  std::vector<RoutedDemand> demands;
};

// Validates the instance, enumerates routes, builds pool + network and
// prepares demands. Throws RaillpError on validation failures.
SolveContext build_context(Instance instance, Scenario scenario,
                           const ModelParams& params);

struct RootResult {
  Master master;
  ColgenResult colgen;
};

// Master with initial minimum-time columns, solved by exact column
// generation (the colgen config's early_stop is overridden to false so the
// objective is a true LP bound).
RootResult solve_root(const SolveContext& ctx, PlanPolicy plan,
                      const ColgenConfig& cfg);

struct SolveOutput {
  IntegerSolution sol;
  ColgenResult root;
  MetricsReport metrics;
};

using TraceFn = std::function<void(const std::string&)>;

// Root colgen + the chosen integer method ("diving" | "pnb"), feasibility
// audit and metrics. `trace` (optional) receives progress lines.
SolveOutput solve_instance(const SolveContext& ctx, PlanPolicy plan,
                           const std::string& method, ColgenConfig colgen_cfg,
                           const HeuristicConfig& heur_cfg,
                           const TraceFn& trace = nullptr);

// Rebuilds an instance's passenger period split for a new peak ratio:
// passenger units of each (origin, destination) pair are pooled and
// re-allocated across the three periods; freight records are untouched.
Instance reallocate_ratio(const Instance& inst, double ratio);

}  // namespace raillp
