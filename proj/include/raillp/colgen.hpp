#pragma once

#include <string>
#include <vector>

#include "raillp/master.hpp"
#include "raillp/params.hpp"
#include "raillp/pricing.hpp"

namespace raillp {

struct IterationStat {
  int iteration = 0;
  double objective = 0.0;
  int columns_added = 0;
  double pricing_ms = 0.0;  // wall time, trace-only
};

struct ColgenResult {
  SolveStatus status = SolveStatus::kNumeric;
  double objective = 0.0;
  // True when the final pricing sweep proved no improving column exists
  // (exact LP optimum); false when early-stop/limits ended the run.
  bool proven_optimal = false;
  int iterations = 0;
  int columns_added = 0;
  std::vector<IterationStat> trace;
};

// Alternates master solves with parallel pricing sweeps until no column
// prices out (exact mode) or `patience` consecutive sweeps improve the
// objective by less than the improvement tolerance (early-stop mode).
ColgenResult run_colgen(Master& master, const PricingProblem& pricing,
                        const ColgenConfig& cfg);

}  // namespace raillp
