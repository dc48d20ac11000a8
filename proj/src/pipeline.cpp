#include "raillp/pipeline.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace raillp {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::kP: return "P";
    case Scenario::kPF: return "P+F";
    case Scenario::kPFM: return "P+F+M";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(const std::string& s) {
  if (s == "P") return Scenario::kP;
  if (s == "P+F") return Scenario::kPF;
  if (s == "P+F+M") return Scenario::kPFM;
  return std::nullopt;
}

const char* to_string(PlanPolicy p) {
  return p == PlanPolicy::kMultiPeriod ? "MP" : "PE";
}

std::optional<PlanPolicy> parse_plan(const std::string& s) {
  if (s == "MP") return PlanPolicy::kMultiPeriod;
  if (s == "PE") return PlanPolicy::kPeriodEqual;
  return std::nullopt;
}

std::vector<Mode> scenario_modes(Scenario s) {
  std::vector<Mode> modes;
  modes.push_back({"passenger", 800.0, 0.0});
  if (s == Scenario::kPF || s == Scenario::kPFM) {
    modes.push_back({"freight", 0.0, 800.0});
  }
  if (s == Scenario::kPFM) {
    modes.push_back({"mixed", 400.0, 400.0});
  }
  return modes;
}

std::vector<DemandEntry> scenario_demands(const Instance& inst, Scenario s) {
  std::vector<DemandEntry> out;
  for (const DemandEntry& e : inst.demands) {
    if (s == Scenario::kP && e.kind == DemandKind::kFreight) continue;
    out.push_back(e);
  }
  return out;
}

SolveContext build_context(Instance instance, Scenario scenario,
                           const ModelParams& params) {
  SolveContext ctx;
  ctx.instance = std::move(instance);
  ctx.scenario = scenario;
  ctx.params = params;

  {
    auto viol = validate_network(ctx.instance.net);
    if (!viol.empty()) {
      throw RaillpError("invalid network: " + viol.front().code + " (" +
                        viol.front().detail + ")");
    }
    viol = validate_demands(ctx.instance.net, ctx.instance.demands);
    if (!viol.empty()) {
      throw RaillpError("invalid demands: " + viol.front().code + " (" +
                        viol.front().detail + ")");
    }
  }

  auto routes = enumerate_routes(
      ctx.instance.net, {StopScheme::kAllStations, StopScheme::kTerminalsOnly},
      params);
  ctx.pool = build_pool(ctx.instance.net, std::move(routes),
                        scenario_modes(scenario), params);
  ctx.cgn = build_cgn(ctx.instance.net, ctx.pool, params);
  ctx.demands = prepare_demands(ctx.cgn, scenario_demands(ctx.instance, scenario));
  return ctx;
}

RootResult solve_root(const SolveContext& ctx, PlanPolicy plan,
                      const ColgenConfig& cfg) {
  RootResult r{Master(ctx.instance.net, ctx.pool, ctx.cgn, ctx.demands, plan,
                      ctx.params),
               ColgenResult{}};
  ColgenConfig exact = cfg;
  exact.early_stop = false;
  PricingProblem pricing;
  pricing.cgn = &ctx.cgn;
  pricing.demands = &ctx.demands;
  r.colgen = run_colgen(r.master, pricing, exact);
  return r;
}

SolveOutput solve_instance(const SolveContext& ctx, PlanPolicy plan,
                           const std::string& method, ColgenConfig colgen_cfg,
                           const HeuristicConfig& heur_cfg,
                           const TraceFn& trace) {
  auto say = [&trace](const std::string& line) {
    if (trace) trace(line);
  };

  RootResult root = solve_root(ctx, plan, colgen_cfg);
  if (root.colgen.status != SolveStatus::kOptimal) {
    throw RaillpError(std::string("root LP failed: ") +
                      to_string(root.colgen.status));
  }
  for (const IterationStat& it : root.colgen.trace) {
    std::ostringstream os;
    os << "root iter " << it.iteration << " objective "
       << it.objective << " columns +" << it.columns_added << " pricing "
       << it.pricing_ms << " ms";
    say(os.str());
  }
  {
    std::ostringstream os;
    os << "root " << (root.colgen.proven_optimal ? "optimal" : "stopped")
       << " objective " << root.colgen.objective << " columns "
       << root.colgen.columns_added << " iterations "
       << root.colgen.iterations;
    say(os.str());
  }
  const bool bound_proven = root.colgen.proven_optimal;
  const double root_bound = root.colgen.objective;

  PricingProblem pricing;
  pricing.cgn = &ctx.cgn;
  pricing.demands = &ctx.demands;
  pricing.elementary_cutoff_nodes = heur_cfg.elementary_cutoff_nodes;

  SolveOutput out{[&]() -> IntegerSolution {
                    if (method == "diving") {
                      return dive(root.master, pricing, colgen_cfg, heur_cfg,
                                  root_bound);
                    }
                    if (method == "pnb") {
                      return price_and_branch(root.master, heur_cfg,
                                              root_bound);
                    }
                    throw RaillpError("unknown method \"" + method +
                                      "\" (expected diving or pnb)");
                  }(),
                  root.colgen,
                  MetricsReport{}};

  if (!bound_proven) {
    // The root hit a limit before certifying the LP optimum, so its value
    // is not a valid upper bound; the gap is undefined.
    out.sol.gap_pct = std::numeric_limits<double>::quiet_NaN();
    say("root bound unproven: gap reported as n/a");
  }

  {
    std::ostringstream os;
    os << method << " rounds " << out.sol.rounds << " colgen iterations "
       << out.sol.colgen_iterations << " objective " << out.sol.objective;
    say(os.str());
  }

  out.metrics = compute_metrics(ctx.instance.net, ctx.pool, ctx.cgn,
                                ctx.demands, out.sol, plan);
  return out;
}

Instance reallocate_ratio(const Instance& inst, double ratio) {
  if (ratio <= 0.0) throw RaillpError("reallocate: ratio must be > 0");
  if (inst.net.periods.size() != 3) {
    throw RaillpError("reallocate: instance must have exactly 3 periods");
  }

  // Pool passenger units per OD pair; keep the first-seen revenue and insist
  // the rest agree (generated instances always do).
  std::map<std::pair<int, int>, double> total, revenue;
  for (const DemandEntry& e : inst.demands) {
    if (e.kind != DemandKind::kPassenger) continue;
    auto key = std::make_pair(e.origin, e.destination);
    if (std::fabs(e.quantity - std::llround(e.quantity)) > 1e-9) {
      throw RaillpError("reallocate: passenger quantities must be integers");
    }
    total[key] += e.quantity;
    auto [it, fresh] = revenue.emplace(key, e.unit_revenue);
    if (!fresh && std::fabs(it->second - e.unit_revenue) > 1e-9) {
      throw RaillpError(
          "reallocate: passenger revenue differs across periods for one "
          "OD pair");
    }
  }

  Instance out;
  out.net = inst.net;
  std::map<std::pair<int, int>, bool> emitted;
  for (const DemandEntry& e : inst.demands) {
    if (e.kind == DemandKind::kFreight) {
      out.demands.push_back(e);
      continue;
    }
    auto key = std::make_pair(e.origin, e.destination);
    if (emitted[key]) continue;
    emitted[key] = true;
    auto slices =
        allocate_periods(std::llround(total[key]), ratio);
    for (int t = 0; t < 3; ++t) {
      if (slices[t] <= 0) continue;
      DemandEntry ne = e;
      ne.period = t;
      ne.quantity = static_cast<double>(slices[t]);
      ne.unit_revenue = revenue[key];
      out.demands.push_back(ne);
    }
  }
  return out;
}

}  // namespace raillp
