#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "raillp/pricing.hpp"
#include "tiny_instances.hpp"

using namespace raillp;

namespace {

// Exhaustive reference pricing for one case: for every demand, the best
// reduced cost over every admissible simple path, compared against the
// returned columns demand by demand.
void check_case(const testfix::TinyCase& c, std::uint64_t dual_seed,
                int cutoff, const LineMask* mask) {
  DualPrices duals = testfix::random_duals(c, dual_seed);
  PricingProblem prob;
  prob.cgn = &c.cgn;
  prob.demands = &c.demands;
  prob.mask = mask;
  prob.elementary_cutoff_nodes = cutoff;
  auto paths = testor::enumerate_all_paths(c.cgn, c.demands, mask);

  for (const SourceGroup& group : group_sources(c.demands)) {
    auto cols = price_source(prob, group, duals);
    std::map<int, const PricedColumn*> by_demand;
    for (const PricedColumn& pc : cols) {
      CHECK(by_demand.count(pc.demand) == 0);  // at most one per demand
      by_demand[pc.demand] = &pc;
    }
    for (int d : group.demand_idx) {
      CAPTURE(d);
      const RoutedDemand& rd = c.demands[d];
      double margin = rd.entry.unit_revenue - duals.demand_dual[d];
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& p : paths[d]) {
        best = std::max(best, margin - testor::path_dual_cost(
                                            c.cgn, duals, rd.entry.kind,
                                            p.arcs));
      }
      auto it = by_demand.find(d);
      if (best > tol::kReducedCost) {
        REQUIRE_MESSAGE(it != by_demand.end(), "missing column, best=" << best);
        const PricedColumn& pc = *it->second;
        CHECK(std::fabs(pc.reduced_cost - best) <= 1e-9);
        CHECK(path_rules(c.cgn, rd, pc.arcs).ok);
        CHECK(pc.minutes == path_duration(c.cgn, pc.arcs));
        double again = margin - testor::path_dual_cost(c.cgn, duals,
                                                       rd.entry.kind, pc.arcs);
        CHECK(std::fabs(again - pc.reduced_cost) <= 1e-9);
      } else {
        CHECK_MESSAGE(it == by_demand.end(),
                      "unexpected column with best=" << best);
      }
    }
  }
}

}  // namespace

TEST_CASE("pareto dominance on (cost, duration)") {
  CHECK(dominates(1.0, 5, 2.0, 6));
  CHECK(dominates(1.0, 5, 1.0, 6));
  CHECK(dominates(1.0, 5, 2.0, 5));
  CHECK(!dominates(1.0, 5, 1.0, 5));  // equal labels do not dominate
  CHECK(!dominates(2.0, 5, 1.0, 6));  // incomparable
  CHECK(!dominates(1.0, 6, 2.0, 5));
  CHECK(!dominates(2.0, 6, 1.0, 5));  // strictly worse
}

TEST_CASE("demands sharing a source are grouped deterministically") {
  auto fx = testfix::two_route_fixture();
  ChangeGoNetwork cgn = build_cgn(fx.net, fx.pool, fx.params);
  std::vector<DemandEntry> entries = {
      {DemandKind::kPassenger, 0, 2, 0, 10.0, 1.0},
      {DemandKind::kPassenger, 0, 3, 0, 10.0, 1.0},
      {DemandKind::kPassenger, 0, 2, 1, 10.0, 1.0},
      {DemandKind::kFreight, 0, 2, -1, 10.0, 1.0},
      {DemandKind::kFreight, 0, 3, -1, 10.0, 1.0},
      {DemandKind::kPassenger, 1, 2, 0, 10.0, 1.0},
      {DemandKind::kPassenger, 2, 3, 0, 10.0, 1.0},  // unservable
  };
  auto rds = prepare_demands(cgn, entries);
  REQUIRE(!rds[6].servable);

  auto groups = group_sources(rds);
  REQUIRE(groups.size() == 4);
  CHECK(groups[0].kind == DemandKind::kPassenger);
  CHECK(groups[0].origin == 0);
  CHECK(groups[0].period == 0);
  CHECK(groups[0].demand_idx == std::vector<int>{0, 1});
  CHECK(groups[1].period == 1);
  CHECK(groups[1].demand_idx == std::vector<int>{2});
  CHECK(groups[2].origin == 1);
  CHECK(groups[2].demand_idx == std::vector<int>{5});
  CHECK(groups[3].kind == DemandKind::kFreight);
  CHECK(groups[3].period == -1);
  CHECK(groups[3].demand_idx == std::vector<int>{3, 4});
}

TEST_CASE("duration-blind phase alone would pick an inadmissible shortcut") {
  // Diamond: a slow direct track x-y and a faster two-leg route via m. The
  // detour threshold rules the direct line out, but its capacity duals are
  // zero, so cost-only search would land on it. The priced column must be
  // the duration-feasible via-m path.
  PhysicalNetwork net;
  net.stations = {{"x", "", StationClass::kMajor, true},
                  {"m", "", StationClass::kIntermediate, false},
                  {"y", "", StationClass::kMajor, true}};
  net.tracks = {{0, 1, 100.0}, {1, 2, 100.0}, {0, 2, 400.0}};
  net.periods = {{"p0", 0.0, 4.0}};
  LineRoute via;
  via.id = 0;
  via.path = {0, 1, 2};
  via.stops = {0, 1, 2};
  via.tracks = {0, 1};
  LineRoute direct;
  direct.id = 1;
  direct.path = {0, 2};
  direct.stops = {0, 2};
  direct.tracks = {2};
  ModelParams params;
  LinePool pool =
      build_pool(net, {via, direct}, {{"passenger", 800.0, 0.0}}, params);
  ChangeGoNetwork cgn = build_cgn(net, pool, params);
  std::vector<DemandEntry> entries = {
      {DemandKind::kPassenger, 0, 2, 0, 100.0, 30.0}};
  auto rds = prepare_demands(cgn, entries);
  REQUIRE(rds[0].servable);
  REQUIRE(rds[0].min_minutes == 46);            // 20 + 6 dwell + 20
  REQUIRE(rds[0].threshold_min == doctest::Approx(69.0));

  DualPrices duals;
  duals.demand_dual = {5.0};
  duals.pax_cap_dual[cgn.line_arcs[0][0]] = 4.0;
  duals.pax_cap_dual[cgn.line_arcs[0][1]] = 6.0;
  duals.pax_cap_dual[cgn.line_arcs[1][0]] = 0.0;

  PricingProblem prob;
  prob.cgn = &cgn;
  prob.demands = &rds;
  auto groups = group_sources(rds);
  REQUIRE(groups.size() == 1);
  auto cols = price_source(prob, groups[0], duals);
  REQUIRE(cols.size() == 1);
  CHECK(cols[0].demand == 0);
  CHECK(cols[0].reduced_cost == doctest::Approx(15.0));  // 30 - 5 - 10
  CHECK(cols[0].minutes == 46);
  // The walk rides line 0 through m.
  bool uses_via = false;
  for (int a : cols[0].arcs) uses_via = uses_via || cgn.arcs[a].line == 0;
  CHECK(uses_via);
  CHECK(path_rules(cgn, rds[0], cols[0].arcs).ok);

  SUBCASE("masking the slow line changes nothing") {
    LineMask mask;
    mask.removed.assign(pool.lines.size(), 0);
    mask.removed[1] = 1;
    prob.mask = &mask;
    auto cols2 = price_source(prob, groups[0], duals);
    REQUIRE(cols2.size() == 1);
    CHECK(cols2[0].reduced_cost == doctest::Approx(15.0));
  }
  SUBCASE("masking the via line leaves no feasible column") {
    LineMask mask;
    mask.removed.assign(pool.lines.size(), 0);
    mask.removed[0] = 1;
    prob.mask = &mask;
    CHECK(price_source(prob, groups[0], duals).empty());
  }
}

TEST_CASE("zero duals price out plain revenue") {
  auto c = testfix::make_tiny_case(testfix::pricing_spec(), 77);
  DualPrices duals;
  duals.demand_dual.assign(c.demands.size(), 0.0);
  PricingProblem prob;
  prob.cgn = &c.cgn;
  prob.demands = &c.demands;
  for (const SourceGroup& g : group_sources(c.demands)) {
    auto cols = price_source(prob, g, duals);
    REQUIRE(cols.size() == g.demand_idx.size());
    for (const PricedColumn& pc : cols) {
      CHECK(pc.reduced_cost ==
            doctest::Approx(c.demands[pc.demand].entry.unit_revenue));
    }
  }
}

TEST_CASE("pricing equals exhaustive enumeration on random miniatures") {
  for (std::uint64_t s = 0; s < 80; ++s) {
    CAPTURE(s);
    auto c = testfix::make_tiny_case(testfix::pricing_spec(), 1000 + s);
    check_case(c, 2000 + s, /*cutoff=*/512, nullptr);
  }
}

TEST_CASE("pricing is exact with visited-set tracking disabled") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    CAPTURE(s);
    auto c = testfix::make_tiny_case(testfix::pricing_spec(), 1000 + s);
    check_case(c, 2000 + s, /*cutoff=*/0, nullptr);
  }
}

TEST_CASE("pricing respects line masks") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    CAPTURE(s);
    auto c = testfix::make_tiny_case(testfix::pricing_spec(), 1000 + s);
    LineMask mask;
    mask.removed.assign(c.pool.lines.size(), 0);
    mask.removed[s % c.pool.lines.size()] = 1;
    check_case(c, 2000 + s, 512, &mask);
  }
}
