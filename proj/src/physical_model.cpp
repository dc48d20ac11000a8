#include "raillp/physical_model.hpp"

#include <algorithm>
#include <queue>

namespace raillp {

std::vector<int> PhysicalNetwork::terminals() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
    if (stations[i].is_terminal) out.push_back(i);
  }
  return out;
}

std::optional<int> PhysicalNetwork::find_station(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
    if (stations[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<int> PhysicalNetwork::find_period(const std::string& id) const {
  for (int i = 0; i < static_cast<int>(periods.size()); ++i) {
    if (periods[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<int> PhysicalNetwork::find_track(int a, int b) const {
  for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
    if (tracks[i].joins(a, b)) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<std::pair<int, int>>> PhysicalNetwork::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(stations.size());
  for (int e = 0; e < static_cast<int>(tracks.size()); ++e) {
    const Track& t = tracks[e];
    adj[t.u].push_back({t.v, e});
    adj[t.v].push_back({t.u, e});
  }
  return adj;
}

std::vector<Violation> validate_network(const PhysicalNetwork& net) {
  std::vector<Violation> out;
  const int n = static_cast<int>(net.stations.size());

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (net.stations[i].id == net.stations[j].id) {
        out.push_back({"duplicate_station_id", net.stations[i].id});
      }
    }
  }
  for (int e = 0; e < static_cast<int>(net.tracks.size()); ++e) {
    const Track& t = net.tracks[e];
    if (t.u < 0 || t.u >= n || t.v < 0 || t.v >= n) {
      out.push_back({"track_bad_endpoint", "track " + std::to_string(e)});
      continue;
    }
    if (t.u == t.v) {
      out.push_back({"track_self_loop", "track " + std::to_string(e) + " at " +
                                            net.stations[t.u].id});
    }
    if (!(t.km > 0.0)) {
      out.push_back({"track_nonpositive_length", "track " + std::to_string(e)});
    }
  }

  if (net.terminals().size() < 2) {
    out.push_back({"too_few_terminals", "need at least 2 terminal stations"});
  }

  if (net.periods.empty()) {
    out.push_back({"no_periods", "at least one period required"});
  }
  for (int t = 0; t + 1 < static_cast<int>(net.periods.size()); ++t) {
    if (net.periods[t].end_hour != net.periods[t + 1].start_hour) {
      out.push_back({"periods_not_contiguous",
                     net.periods[t].id + " -> " + net.periods[t + 1].id});
    }
  }
  for (const Period& p : net.periods) {
    if (!(p.end_hour > p.start_hour)) {
      out.push_back({"period_nonpositive_length", p.id});
    }
  }

  // Reachability: with an undirected graph, "every station reachable from
  // every terminal" is equivalent to one component containing everything.
  if (n > 0 && !net.terminals().empty() && out.empty()) {
    auto adj = net.adjacency();
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(net.terminals()[0]);
    seen[net.terminals()[0]] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, e] : adj[u]) {
        (void)e;
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!seen[i]) {
        out.push_back({"station_unreachable", net.stations[i].id});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_demands(const PhysicalNetwork& net,
                                        const std::vector<DemandEntry>& demands) {
  std::vector<Violation> out;
  const int n = static_cast<int>(net.stations.size());
  const int np = static_cast<int>(net.periods.size());
  for (int i = 0; i < static_cast<int>(demands.size()); ++i) {
    const DemandEntry& d = demands[i];
    const std::string tag = "demand " + std::to_string(i);
    if (d.origin < 0 || d.origin >= n || d.destination < 0 ||
        d.destination >= n) {
      out.push_back({"demand_bad_station", tag});
      continue;
    }
    if (d.origin == d.destination) {
      out.push_back({"demand_same_endpoints", tag});
    }
    if (d.kind == DemandKind::kPassenger) {
      if (d.period < 0 || d.period >= np) {
        out.push_back({"demand_bad_period", tag});
      }
    } else if (d.period != -1) {
      out.push_back({"freight_demand_has_period", tag});
    }
    if (!(d.quantity > 0.0)) {
      out.push_back({"demand_nonpositive_quantity", tag});
    }
    if (d.unit_revenue < 0.0) {
      out.push_back({"demand_negative_revenue", tag});
    }
  }
  return out;
}

std::optional<double> shortest_physical_distance(const PhysicalNetwork& net,
                                                 int origin, int destination) {
  const int n = static_cast<int>(net.stations.size());
  if (origin < 0 || origin >= n || destination < 0 || destination >= n) {
    return std::nullopt;
  }
  auto adj = net.adjacency();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[origin] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, origin});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (auto [v, e] : adj[u]) {
      double nd = du + net.tracks[e].km;
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[destination])) return std::nullopt;
  return dist[destination];
}

}  // namespace raillp
