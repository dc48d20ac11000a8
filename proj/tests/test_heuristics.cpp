#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "raillp/heuristics.hpp"
#include "tiny_instances.hpp"

using namespace raillp;

namespace {

struct Pipeline {
  testfix::TwoRouteFixture fx;
  ChangeGoNetwork cgn;
  std::vector<DemandEntry> entries;
  std::vector<RoutedDemand> demands;
};

Pipeline fixture_case(double qty, double revenue) {
  Pipeline p;
  p.fx = testfix::two_route_fixture();
  p.cgn = build_cgn(p.fx.net, p.fx.pool, p.fx.params);
  p.entries = {{DemandKind::kPassenger, 0, 2, 0, qty, revenue}};
  p.demands = prepare_demands(p.cgn, p.entries);
  return p;
}

struct RootedMaster {
  Master master;
  PricingProblem prob;
  double bound = 0.0;
};

RootedMaster solve_root(const Pipeline& p) {
  RootedMaster r{Master(p.fx.net, p.fx.pool, p.cgn, p.demands,
                        PlanPolicy::kMultiPeriod, p.fx.params),
                 {}, 0.0};
  r.prob.cgn = &p.cgn;
  r.prob.demands = &p.demands;
  ColgenConfig cfg;
  auto res = run_colgen(r.master, r.prob, cfg);
  REQUIRE(res.status == SolveStatus::kOptimal);
  REQUIRE(res.proven_optimal);
  r.bound = res.objective;
  return r;
}

// Independent feasibility audit of an integer plan against the oracle's
// frequency structure, returning the flow-optimal profit at that plan.
double audit_plan(const testor::FreqModel& fm, const IntegerSolution& sol,
                  const ChangeGoNetwork& cgn,
                  const std::vector<RoutedDemand>& demands,
                  const std::vector<std::vector<testor::EnumPath>>& paths) {
  std::vector<long long> freq(fm.var_lines.size(), 0);
  for (std::size_t v = 0; v < fm.var_lines.size(); ++v) {
    REQUIRE(!fm.var_lines[v].empty());
    freq[v] = sol.frequency[fm.var_lines[v][0]];
    for (int line : fm.var_lines[v]) {
      CHECK(sol.frequency[line] == freq[v]);  // shared vars stay in sync
    }
    CHECK(freq[v] >= 0);
    CHECK(static_cast<double>(freq[v]) <= fm.cap[v] + 1e-9);
  }
  for (const auto& row : fm.throughput) {
    double lhs = 0.0;
    for (auto [v, coef] : row.coefs) {
      lhs += coef * static_cast<double>(freq[v]);
    }
    CHECK(lhs <= row.rhs + 1e-9);
  }
  for (const SolvedFlow& f : sol.flows) {
    CHECK(f.qty > 0.0);
    CHECK(path_rules(cgn, demands[f.demand], f.arcs).ok);
  }
  return testor::fixed_frequency_profit(cgn, demands, fm, freq, paths);
}

}  // namespace

TEST_CASE("gap formula conventions") {
  CHECK(gap_percent(50.0, 100.0) == doctest::Approx(50.0));
  CHECK(gap_percent(0.0, 100.0) == doctest::Approx(100.0));
  CHECK(gap_percent(100.0, 100.0) == doctest::Approx(0.0));
  CHECK(gap_percent(0.0, 0.0) == 0.0);
  CHECK(gap_percent(1e-9, 1e-9) == 0.0);
  CHECK(gap_percent(-1e-9, 0.0) == 0.0);
  // Clamped to [0, 100] even when the algebra says otherwise.
  CHECK(gap_percent(-200.0, -100.0) == 0.0);
  CHECK(gap_percent(-100.0, -100.0) == 0.0);
  CHECK(gap_percent(-1000.0, 50.0) == 100.0);
  double tiny = gap_percent(100.0 - 1e-7, 100.0);
  CHECK(tiny >= 0.0);
  CHECK(tiny <= 1e-6);
  CHECK(gap_percent(100.0 + 5e-7, 100.0) == 0.0);  // inside tolerance
  // A genuine bound violation is an internal error.
  CHECK_THROWS_AS(gap_percent(200.0, 100.0), RaillpError);
  CHECK_THROWS_AS(gap_percent(0.1, 0.0), RaillpError);
  CHECK_THROWS_AS(gap_percent(-50.0, -100.0), RaillpError);
}

TEST_CASE("integral root: both heuristics return it unchanged") {
  // 800 passengers exactly fill one train: the LP root is integral at
  // frequency 1 with profit 56000 - 53000.
  auto p = fixture_case(800.0, 70.0);

  auto rd = solve_root(p);
  CHECK(rd.bound == doctest::Approx(3000.0));
  HeuristicConfig hc;
  ColgenConfig cg;
  IntegerSolution dv = dive(rd.master, rd.prob, cg, hc, rd.bound);
  CHECK(dv.method == "diving");
  CHECK(dv.status == SolveStatus::kOptimal);
  CHECK(dv.rounds == 0);
  CHECK(dv.objective == doctest::Approx(3000.0));
  CHECK(dv.gap_pct == doctest::Approx(0.0));
  CHECK(!dv.zero_plan_fallback);
  REQUIRE(dv.frequency.size() == 8);
  CHECK(dv.frequency[0] == 1);
  for (int l = 1; l < 8; ++l) CHECK(dv.frequency[l] == 0);
  REQUIRE(dv.flows.size() == 1);
  CHECK(dv.flows[0].qty == doctest::Approx(800.0));
  CHECK(dv.flows[0].arcs == std::vector<int>{16, 0, 1, 49});

  auto rp = solve_root(p);
  IntegerSolution pb = price_and_branch(rp.master, hc, rp.bound);
  CHECK(pb.method == "pnb");
  CHECK(pb.objective == doctest::Approx(3000.0));
  CHECK(pb.proven_optimal);
  CHECK(pb.gap_pct == doctest::Approx(0.0));
  CHECK(!pb.zero_plan_fallback);
  CHECK(pb.frequency[0] == 1);
}

TEST_CASE("tiny fractional demand forces the heuristics apart") {
  // 10 passengers at a huge fare: the LP runs 1/80 of a train for profit
  // 9337.5, but integrally a full train loses money.
  auto p = fixture_case(10.0, 1000.0);

  auto rd = solve_root(p);
  CHECK(rd.bound == doctest::Approx(9337.5));

  SUBCASE("diving rounds up and eats the loss") {
    HeuristicConfig hc;
    ColgenConfig cg;
    IntegerSolution dv = dive(rd.master, rd.prob, cg, hc, rd.bound);
    CHECK(dv.rounds == 1);
    CHECK(dv.objective == doctest::Approx(-43000.0));
    CHECK(dv.gap_pct == doctest::Approx(100.0));  // clamped
    CHECK(!dv.zero_plan_fallback);  // a train does run
    CHECK(dv.frequency[0] == 1);
    CHECK(!dv.proven_optimal);
  }
  SUBCASE("branch and bound proves the zero plan is better") {
    HeuristicConfig hc;
    IntegerSolution pb = price_and_branch(rd.master, hc, rd.bound);
    CHECK(pb.objective == doctest::Approx(0.0));
    CHECK(pb.proven_optimal);
    CHECK(pb.gap_pct == doctest::Approx(100.0));
    // The empty plan here is a genuine incumbent, not a fallback.
    CHECK(!pb.zero_plan_fallback);
    for (long long f : pb.frequency) CHECK(f == 0);
  }
  SUBCASE("a vanishing time budget falls back to the zero plan") {
    HeuristicConfig hc;
    hc.time_limit_sec = 1e-9;
    IntegerSolution pb = price_and_branch(rd.master, hc, rd.bound);
    CHECK(pb.objective == 0.0);
    CHECK(!pb.proven_optimal);
    CHECK(pb.zero_plan_fallback);
    CHECK(pb.gap_pct == doctest::Approx(100.0));
  }
}

TEST_CASE("worthless demand leaves a declared zero plan") {
  auto p = fixture_case(10.0, 0.01);
  auto rd = solve_root(p);
  CHECK(rd.bound == doctest::Approx(0.0));
  HeuristicConfig hc;
  ColgenConfig cg;
  IntegerSolution dv = dive(rd.master, rd.prob, cg, hc, rd.bound);
  CHECK(dv.objective == doctest::Approx(0.0));
  CHECK(dv.zero_plan_fallback);
  CHECK(dv.gap_pct == 0.0);
  for (long long f : dv.frequency) CHECK(f == 0);
}

TEST_CASE("heuristics against brute force on random miniatures") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    CAPTURE(s);
    auto c = testfix::make_tiny_case(testfix::integer_spec(), 9000 + s);
    auto paths = testor::enumerate_all_paths(c.cgn, c.demands);
    auto brute = testor::brute_force_optimum(c.net, c.pool, c.cgn, c.demands,
                                             c.plan, c.params, paths);
    auto fm = testor::derive_freq_model(c.net, c.pool, c.plan, c.params);

    // Root relaxation bounds the integer optimum from above.
    Master root(c.net, c.pool, c.cgn, c.demands, c.plan, c.params);
    PricingProblem prob;
    prob.cgn = &c.cgn;
    prob.demands = &c.demands;
    ColgenConfig cg;
    auto rootres = run_colgen(root, prob, cg);
    REQUIRE(rootres.status == SolveStatus::kOptimal);
    REQUIRE(rootres.proven_optimal);
    CHECK(rootres.objective >= brute.objective - 1e-6);

    HeuristicConfig hc;
    {
      Master m = root;
      IntegerSolution dv = dive(m, prob, cg, hc, rootres.objective);
      CHECK(dv.status == SolveStatus::kOptimal);
      CHECK(dv.objective <= brute.objective + 1e-6);
      CHECK(dv.gap_pct >= 0.0);
      CHECK(dv.gap_pct <= 100.0);
      double best_at_plan = audit_plan(fm, dv, c.cgn, c.demands, paths);
      CHECK(dv.objective <= best_at_plan + 1e-6);
    }
    {
      Master m = root;
      IntegerSolution pb = price_and_branch(m, hc, rootres.objective);
      CHECK(pb.status == SolveStatus::kOptimal);
      CHECK(pb.objective <= brute.objective + 1e-6);
      double best_at_plan = audit_plan(fm, pb, c.cgn, c.demands, paths);
      CHECK(pb.objective <= best_at_plan + 1e-6);
    }
    {
      // Seeded with every admissible column, branch and bound must land on
      // the brute-force optimum exactly.
      Master m(c.net, c.pool, c.cgn, c.demands, c.plan, c.params);
      for (std::size_t d = 0; d < paths.size(); ++d) {
        for (const auto& pth : paths[d]) {
          Column col;
          col.demand = static_cast<int>(d);
          col.arcs = pth.arcs;
          col.minutes = pth.minutes;
          m.add_column(col);
        }
      }
      REQUIRE(m.solve() == SolveStatus::kOptimal);
      double bound = m.objective();
      CHECK(bound >= brute.objective - 1e-6);
      HeuristicConfig unlimited;
      unlimited.time_limit_sec = 0.0;
      IntegerSolution pb = price_and_branch(m, unlimited, bound);
      CHECK(pb.proven_optimal);
      CHECK(pb.objective ==
            doctest::Approx(brute.objective).epsilon(1e-9).scale(1e3));
    }
  }
}

TEST_CASE("diving is deterministic") {
  auto c = testfix::make_tiny_case(testfix::integer_spec(), 9004);
  auto run_once = [&]() {
    Master m(c.net, c.pool, c.cgn, c.demands, c.plan, c.params);
    PricingProblem prob;
    prob.cgn = &c.cgn;
    prob.demands = &c.demands;
    ColgenConfig cg;
    auto res = run_colgen(m, prob, cg);
    REQUIRE(res.proven_optimal);
    HeuristicConfig hc;
    return dive(m, prob, cg, hc, res.objective);
  };
  IntegerSolution a = run_once();
  IntegerSolution b = run_once();
  CHECK(a.objective == b.objective);
  CHECK(a.frequency == b.frequency);
  CHECK(a.rounds == b.rounds);
}
