#include "raillp/colgen.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace raillp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Prices all groups, `jobs`-way parallel, results slotted by group index so
// the merge order never depends on thread scheduling.
std::vector<std::vector<PricedColumn>> price_all(
    const PricingProblem& prob, const std::vector<SourceGroup>& groups,
    const DualPrices& duals, int jobs) {
  std::vector<std::vector<PricedColumn>> out(groups.size());
  if (jobs <= 1 || groups.size() <= 1) {
    for (size_t g = 0; g < groups.size(); ++g) {
      out[g] = price_source(prob, groups[g], duals);
    }
    return out;
  }
  std::vector<std::thread> workers;
  std::atomic<size_t> next{0};
  int n = std::min<int>(jobs, static_cast<int>(groups.size()));
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        size_t g = next.fetch_add(1);
        if (g >= groups.size()) break;
        out[g] = price_source(prob, groups[g], duals);
      }
    });
  }
  for (auto& t : workers) t.join();
  return out;
}

}  // namespace

ColgenResult run_colgen(Master& master, const PricingProblem& pricing,
                        const ColgenConfig& cfg) {
  ColgenResult res;
  auto t0 = Clock::now();

  res.status = master.solve();
  if (res.status != SolveStatus::kOptimal) {
    res.objective = master.objective();
    return res;
  }

  std::vector<SourceGroup> groups = group_sources(*pricing.demands);
  double prev_obj = master.objective();
  int nonimproving = 0;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    if (cfg.time_limit_sec > 0.0 &&
        ms_since(t0) / 1000.0 > cfg.time_limit_sec) {
      break;  // not proven optimal
    }

    DualPrices duals = master.duals();
    auto t_price = Clock::now();
    auto priced = price_all(pricing, groups, duals, cfg.jobs);
    double price_ms = ms_since(t_price);

    int added = 0;
    for (const auto& group_cols : priced) {
      for (const PricedColumn& pc : group_cols) {
        Column col;
        col.demand = pc.demand;
        col.arcs = pc.arcs;
        col.minutes = pc.minutes;
        if (master.add_column(std::move(col))) ++added;
      }
    }
    res.iterations = iter + 1;
    res.columns_added += added;

    if (added == 0) {
      // Full sweep produced nothing new: demands with margin below
      // tolerance cannot price out (costs are nonnegative), every other
      // demand was searched exactly — LP optimum certified.
      res.proven_optimal = true;
      break;
    }

    res.status = master.solve();
    if (res.status != SolveStatus::kOptimal) break;
    double obj = master.objective();
    res.trace.push_back({iter + 1, obj, added, price_ms});

    if (cfg.early_stop) {
      if (obj - prev_obj < tol::kImprovement) {
        if (++nonimproving >= cfg.patience) {
          prev_obj = obj;
          break;
        }
      } else {
        nonimproving = 0;
      }
    }
    prev_obj = obj;

    if (static_cast<int>(master.columns().size()) >= cfg.max_columns) break;
  }

  res.objective = master.objective();
  return res;
}

}  // namespace raillp
