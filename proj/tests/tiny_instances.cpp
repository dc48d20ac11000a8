#include "tiny_instances.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "oracles.hpp"
#include "raillp/types.hpp"

namespace raillp::testfix {

TwoRouteFixture two_route_fixture() {
  TwoRouteFixture fx;
  fx.net.stations = {
      {"a", "Alpha", StationClass::kMajor, true},
      {"b", "Beta", StationClass::kSmall, false},
      {"c", "Gamma", StationClass::kMajor, true},
      {"d", "Delta", StationClass::kMajor, true},
  };
  fx.net.tracks = {{0, 1, 300.0}, {1, 2, 200.0}, {1, 3, 250.0}};
  fx.net.periods = {{"p0", 0.0, 4.0}, {"p1", 4.0, 8.0}};

  LineRoute r0;
  r0.id = 0;
  r0.path = {0, 1, 2};
  r0.stops = {0, 1, 2};
  r0.tracks = {0, 1};
  LineRoute r1;
  r1.id = 1;
  r1.path = {0, 1, 3};
  r1.stops = {0, 1, 3};
  r1.tracks = {0, 2};
  fx.routes = {r0, r1};

  const std::vector<Mode> modes = {{"passenger", 800.0, 0.0},
                                   {"freight", 0.0, 800.0}};
  fx.pool = build_pool(fx.net, fx.routes, modes, fx.params);
  return fx;
}

namespace {

struct Draw {
  SplitMix64 rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}
  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

PhysicalNetwork random_net(Draw& d, const TinySpec& spec, int* n_periods) {
  PhysicalNetwork net;
  const int n = d.range(spec.min_stations, spec.max_stations);
  const std::array<StationClass, 4> classes = {
      StationClass::kMajor, StationClass::kSmall, StationClass::kIntermediate,
      StationClass::kMinor};
  for (int i = 0; i < n; ++i) {
    Station s;
    s.id = "t" + std::to_string(i);
    s.name = s.id;
    s.cls = classes[i % classes.size()];
    s.is_terminal = true;  // every station may start/end a route
    net.stations.push_back(s);
  }
  // Random spanning tree, then possibly one extra edge.
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(d.rng.below(static_cast<std::uint64_t>(i)));
    const double km = 30.0 + 10.0 * static_cast<double>(d.rng.below(22));
    net.tracks.push_back({j, i, km});
  }
  if (n >= 3 && d.rng.below(2) == 0) {
    for (int tries = 0; tries < 4; ++tries) {
      const int u = d.range(0, n - 1);
      const int v = d.range(0, n - 1);
      if (u == v) continue;
      bool dup = false;
      for (const Track& t : net.tracks) dup = dup || t.joins(u, v);
      if (dup) continue;
      const double km = 30.0 + 10.0 * static_cast<double>(d.rng.below(22));
      net.tracks.push_back({u, v, km});
      break;
    }
  }
  const int np = d.range(spec.min_periods, spec.max_periods);
  const double h = spec.tight_throughput ? 2.0 : (d.rng.below(2) ? 4.0 : 2.0);
  for (int t = 0; t < np; ++t) {
    net.periods.push_back({"p" + std::to_string(t), 6.0 + t * h, 6.0 + (t + 1) * h});
  }
  *n_periods = np;
  return net;
}

std::vector<LineRoute> random_routes(Draw& d, const PhysicalNetwork& net,
                                     const TinySpec& spec) {
  const auto adj = net.adjacency();
  const int n = static_cast<int>(net.stations.size());
  const int nr = d.range(spec.min_routes, spec.max_routes);
  std::vector<LineRoute> routes;
  for (int r = 0; r < nr; ++r) {
    std::vector<char> used(n, 0);
    LineRoute route;
    int at = d.range(0, n - 1);
    used[at] = 1;
    route.path.push_back(at);
    const int target = 1 + static_cast<int>(d.rng.below(3));
    for (int step = 0; step < target; ++step) {
      std::vector<std::pair<int, int>> options;
      for (const auto& [nb, tr] : adj[at]) {
        if (!used[nb]) options.push_back({nb, tr});
      }
      if (options.empty()) break;
      const auto& pick =
          options[d.rng.below(static_cast<std::uint64_t>(options.size()))];
      route.path.push_back(pick.first);
      route.tracks.push_back(pick.second);
      used[pick.first] = 1;
      at = pick.first;
    }
    if (route.path.size() < 2) continue;
    if (route.path.size() >= 3 && d.rng.below(4) == 0) {
      route.scheme = StopScheme::kTerminalsOnly;
      route.stops = {route.path.front(), route.path.back()};
    } else {
      route.scheme = StopScheme::kAllStations;
      route.stops = route.path;
    }
    bool dup = false;
    for (const LineRoute& other : routes) {
      dup = dup || (other.path == route.path && other.stops == route.stops);
    }
    if (dup) continue;
    route.id = static_cast<int>(routes.size());
    routes.push_back(std::move(route));
  }
  return routes;
}

}  // namespace

TinyCase make_tiny_case(const TinySpec& spec, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    Draw d(derive_seed(seed, 0x7117, attempt));
    TinyCase c;
    int np = 0;
    c.net = random_net(d, spec, &np);
    const int n = static_cast<int>(c.net.stations.size());

    c.params.line_cost_per_hour =
        std::array<double, 3>{60.0, 150.0, 300.0}[d.rng.below(3)] *
        (spec.small_money ? 1.0 : 100.0);
    c.params.throughput_per_hour =
        spec.tight_throughput ? (d.rng.below(2) ? 0.5 : 1.0) : 6.0;

    std::vector<Mode> all_modes = {{"passenger", 80.0, 0.0},
                                   {"freight", 0.0, 80.0},
                                   {"mixed", 40.0, 40.0}};
    if (!spec.small_money) {
      for (Mode& m : all_modes) {
        m.passenger_capacity *= 10.0;
        m.freight_capacity *= 10.0;
      }
    }
    const int nm = d.range(1, 2);
    std::array<int, 3> order = {0, 1, 2};
    for (int i = 0; i < 2; ++i) {
      const int j = i + static_cast<int>(d.rng.below(static_cast<std::uint64_t>(3 - i)));
      std::swap(order[i], order[j]);
    }
    std::vector<Mode> modes;
    for (int i = 0; i < nm; ++i) modes.push_back(all_modes[order[i]]);

    std::vector<LineRoute> routes = random_routes(d, c.net, spec);
    if (routes.empty()) continue;
    c.pool = build_pool(c.net, routes, modes, c.params);
    if (static_cast<int>(c.pool.lines.size()) > spec.max_lines) continue;

    c.cgn = build_cgn(c.net, c.pool, c.params);
    if (spec.max_cgn_nodes > 0 &&
        static_cast<int>(c.cgn.nodes.size()) > spec.max_cgn_nodes) {
      continue;
    }

    const int nd = d.range(spec.min_demands, spec.max_demands);
    for (int k = 0; k < nd; ++k) {
      DemandEntry e;
      e.kind = d.rng.below(2) ? DemandKind::kFreight : DemandKind::kPassenger;
      e.origin = d.range(0, n - 1);
      int dest = static_cast<int>(d.rng.below(static_cast<std::uint64_t>(n - 1)));
      if (dest >= e.origin) ++dest;
      e.destination = dest;
      e.period = e.kind == DemandKind::kPassenger ? d.range(0, np - 1) : -1;
      e.quantity = static_cast<double>(
          spec.small_money ? 5 + d.rng.below(86) : 50 + d.rng.below(451));
      e.unit_revenue =
          0.25 * static_cast<double>(spec.small_money ? 4 + d.rng.below(117)
                                                      : 40 + d.rng.below(961));
      c.entries.push_back(e);
    }
    c.demands = prepare_demands(c.cgn, c.entries);
    bool any_servable = false;
    for (const RoutedDemand& rd : c.demands) any_servable |= rd.servable;
    if (!any_servable) continue;

    if (spec.max_total_paths > 0) {
      try {
        const auto paths = testor::enumerate_all_paths(
            c.cgn, c.demands, nullptr,
            static_cast<std::size_t>(spec.max_total_paths));
        std::size_t total = 0;
        for (const auto& p : paths) total += p.size();
        if (total > static_cast<std::size_t>(spec.max_total_paths)) continue;
      } catch (const RaillpError&) {
        continue;
      }
    }

    c.plan = (spec.randomize_plan && d.rng.below(2))
                 ? PlanPolicy::kPeriodEqual
                 : PlanPolicy::kMultiPeriod;
    return c;
  }
  throw RaillpError("tiny case generation exhausted its attempts");
}

TinySpec pricing_spec() {
  TinySpec s;
  s.max_cgn_nodes = 12;
  s.max_lines = 8;
  s.min_stations = 2;
  s.max_stations = 4;
  s.min_periods = 1;
  s.max_periods = 2;
  s.min_routes = 1;
  s.max_routes = 3;
  s.min_demands = 1;
  s.max_demands = 4;
  return s;
}

TinySpec colgen_spec() {
  TinySpec s;
  s.max_lines = 30;
  s.max_total_paths = 500;
  s.min_stations = 3;
  s.max_stations = 5;
  s.min_periods = 1;
  s.max_periods = 3;
  s.min_routes = 3;
  s.max_routes = 5;
  s.min_demands = 4;
  s.max_demands = 10;
  return s;
}

TinySpec integer_spec() {
  TinySpec s;
  s.max_lines = 6;
  s.max_total_paths = 150;
  s.min_stations = 2;
  s.max_stations = 4;
  s.min_periods = 1;
  s.max_periods = 2;
  s.min_routes = 1;
  s.max_routes = 3;
  s.min_demands = 1;
  s.max_demands = 5;
  s.tight_throughput = true;
  s.randomize_plan = true;
  return s;
}

DualPrices random_duals(const TinyCase& c, std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, 0xd0a1));
  DualPrices duals;
  duals.demand_dual.assign(c.demands.size(), 0.0);
  // Scales chosen against the factory's revenue range so that positive and
  // nonpositive margins both occur often.
  for (const RoutedDemand& d : c.demands) {
    if (!d.servable) continue;
    duals.demand_dual[d.index] = static_cast<double>(rng.below(257)) / 8.0;
  }
  for (std::size_t a = 0; a < c.cgn.arcs.size(); ++a) {
    if (c.cgn.arcs[a].kind != ArcKind::kTravel) continue;
    if (rng.below(2) == 0) {
      duals.pax_cap_dual[static_cast<int>(a)] =
          static_cast<double>(rng.below(81)) / 8.0;
    }
    if (rng.below(2) == 0) {
      duals.freight_cap_dual[static_cast<int>(a)] =
          static_cast<double>(rng.below(81)) / 8.0;
    }
  }
  return duals;
}

}  // namespace raillp::testfix
