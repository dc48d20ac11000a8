#include "raillp/line_pool.hpp"

#include <algorithm>
#include <sstream>

namespace raillp {

namespace {

// Depth-first enumeration of all simple paths between two stations.
void dfs_paths(const PhysicalNetwork& net,
               const std::vector<std::vector<std::pair<int, int>>>& adj,
               int target, std::vector<int>& path, std::vector<int>& tracks,
               std::vector<char>& used,
               std::vector<std::pair<std::vector<int>, std::vector<int>>>& out,
               int cap) {
  int u = path.back();
  if (u == target) {
    out.push_back({path, tracks});
    if (static_cast<int>(out.size()) > cap) {
      throw RaillpError("pool too large: route cap exceeded");
    }
    return;
  }
  for (auto [v, e] : adj[u]) {
    if (used[v]) continue;
    used[v] = 1;
    path.push_back(v);
    tracks.push_back(e);
    dfs_paths(net, adj, target, path, tracks, used, out, cap);
    tracks.pop_back();
    path.pop_back();
    used[v] = 0;
  }
}

std::vector<int> stops_for(const std::vector<int>& path, StopScheme scheme) {
  if (scheme == StopScheme::kAllStations) return path;
  return {path.front(), path.back()};
}

}  // namespace

std::vector<LineRoute> enumerate_routes(const PhysicalNetwork& net,
                                        const std::vector<StopScheme>& schemes,
                                        const ModelParams& params) {
  auto adj = net.adjacency();
  // Deterministic neighbor order.
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  std::vector<int> terminals = net.terminals();
  std::vector<std::pair<std::vector<int>, std::vector<int>>> paths;
  for (int a : terminals) {
    for (int b : terminals) {
      if (a == b) continue;
      std::vector<int> path{a};
      std::vector<int> tracks;
      std::vector<char> used(net.stations.size(), 0);
      used[a] = 1;
      dfs_paths(net, adj, b, path, tracks, used, paths, params.route_cap);
    }
  }

  std::vector<LineRoute> routes;
  for (const auto& [path, tracks] : paths) {
    for (StopScheme scheme : schemes) {
      LineRoute r;
      r.path = path;
      r.stops = stops_for(path, scheme);
      r.tracks = tracks;
      r.scheme = scheme;
      routes.push_back(std::move(r));
    }
  }

  // Deduplicate routes whose stop pattern and physical path coincide (a
  // two-stop path is the same line under either scheme).
  std::sort(routes.begin(), routes.end(),
            [](const LineRoute& a, const LineRoute& b) {
              if (a.path != b.path) return a.path < b.path;
              if (a.stops != b.stops) return a.stops < b.stops;
              return a.scheme < b.scheme;
            });
  routes.erase(std::unique(routes.begin(), routes.end(),
                           [](const LineRoute& a, const LineRoute& b) {
                             return a.path == b.path && a.stops == b.stops;
                           }),
               routes.end());
  if (static_cast<int>(routes.size()) > params.route_cap) {
    throw RaillpError("pool too large: route cap exceeded");
  }
  for (int i = 0; i < static_cast<int>(routes.size()); ++i) routes[i].id = i;
  return routes;
}

std::vector<int> segment_minutes(const PhysicalNetwork& net,
                                 const LineRoute& route,
                                 const ModelParams& params) {
  // Map each path position to its cumulative running minutes from the start;
  // per-track rounding keeps times integral and direction-symmetric.
  std::vector<long long> cum{0};
  for (int e : route.tracks) {
    long long run = round_half_up(net.tracks[e].km / params.speed_kmh * 60.0);
    cum.push_back(cum.back() + run);
  }
  std::vector<int> pos_of_station(net.stations.size(), -1);
  for (int i = 0; i < static_cast<int>(route.path.size()); ++i) {
    pos_of_station[route.path[i]] = i;
  }

  std::vector<int> out;
  for (int s = 0; s + 1 < static_cast<int>(route.stops.size()); ++s) {
    int from_pos = pos_of_station[route.stops[s]];
    int to_pos = pos_of_station[route.stops[s + 1]];
    long long mins = cum[to_pos] - cum[from_pos];
    if (s > 0) mins += params.dwell_min;  // dwell at intermediate stop `s`
    out.push_back(static_cast<int>(mins));
  }
  return out;
}

LinePool build_pool(const PhysicalNetwork& net, std::vector<LineRoute> routes,
                    const std::vector<Mode>& modes, const ModelParams& params) {
  LinePool pool;
  pool.routes = std::move(routes);
  pool.modes = modes;

  std::vector<int> route_minutes(pool.routes.size(), 0);
  for (int r = 0; r < static_cast<int>(pool.routes.size()); ++r) {
    int total = 0;
    for (int m : segment_minutes(net, pool.routes[r], params)) total += m;
    route_minutes[r] = total;
  }

  // Period-major, then route, then mode: matches the canonical line table
  // layout for the two-route example.
  for (int t = 0; t < static_cast<int>(net.periods.size()); ++t) {
    for (int r = 0; r < static_cast<int>(pool.routes.size()); ++r) {
      for (int m = 0; m < static_cast<int>(modes.size()); ++m) {
        Line l;
        l.id = static_cast<int>(pool.lines.size());
        l.route = r;
        l.period = t;
        l.mode = m;
        l.duration_min = route_minutes[r];
        l.cost = params.line_cost_per_hour * route_minutes[r] / 60.0;
        pool.lines.push_back(l);
      }
    }
  }
  return pool;
}

std::string dump_pool(const PhysicalNetwork& net, const LinePool& pool) {
  std::ostringstream os;
  os << "pool routes=" << pool.routes.size() << " modes=" << pool.modes.size()
     << " lines=" << pool.lines.size() << "\n";
  for (const Line& l : pool.lines) {
    const LineRoute& r = pool.routes[l.route];
    os << "line " << l.id << " route=";
    for (int i = 0; i < static_cast<int>(r.path.size()); ++i) {
      if (i) os << "-";
      os << net.stations[r.path[i]].id;
    }
    os << " stops=";
    for (int i = 0; i < static_cast<int>(r.stops.size()); ++i) {
      if (i) os << "-";
      os << net.stations[r.stops[i]].id;
    }
    os << " scheme=" << to_string(r.scheme)
       << " period=" << net.periods[l.period].id
       << " mode=" << pool.modes[l.mode].id << " minutes=" << l.duration_min
       << " cost=" << l.cost << "\n";
  }
  return os.str();
}

}  // namespace raillp
