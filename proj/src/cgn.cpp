#include "raillp/cgn.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace raillp {

int ChangeGoNetwork::count(ArcKind k) const {
  int n = 0;
  for (const CgnArc& a : arcs) n += (a.kind == k);
  return n;
}

int ChangeGoNetwork::count(NodeKind k) const {
  int n = 0;
  for (const CgnNode& a : nodes) n += (a.kind == k);
  return n;
}

ChangeGoNetwork build_cgn(const PhysicalNetwork& net, const LinePool& pool,
                          const ModelParams& params) {
  ChangeGoNetwork g;
  g.params = params;
  g.n_stations = static_cast<int>(net.stations.size());
  g.n_periods = static_cast<int>(net.periods.size());

  // Travel nodes: one per scheduled stop of each line, grouped by line.
  g.line_nodes.resize(pool.lines.size());
  for (const Line& l : pool.lines) {
    const LineRoute& r = pool.routes[l.route];
    for (int s = 0; s < static_cast<int>(r.stops.size()); ++s) {
      CgnNode n;
      n.kind = NodeKind::kTravel;
      n.station = r.stops[s];
      n.period = l.period;
      n.line = l.id;
      n.stop_pos = s;
      g.line_nodes[l.id].push_back(static_cast<int>(g.nodes.size()));
      g.nodes.push_back(n);
    }
  }

  // Station nodes for every (station, period).
  g.station_node_of.assign(g.n_stations * g.n_periods, -1);
  for (int i = 0; i < g.n_stations; ++i) {
    for (int t = 0; t < g.n_periods; ++t) {
      CgnNode n;
      n.kind = NodeKind::kStation;
      n.station = i;
      n.period = t;
      g.station_node_of[i * g.n_periods + t] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(n);
    }
  }

  // Travel arcs between consecutive scheduled stops.
  g.line_arcs.resize(pool.lines.size());
  for (const Line& l : pool.lines) {
    const LineRoute& r = pool.routes[l.route];
    std::vector<int> seg = segment_minutes(net, r, params);
    std::vector<int> pos_of_station(net.stations.size(), -1);
    for (int i = 0; i < static_cast<int>(r.path.size()); ++i) {
      pos_of_station[r.path[i]] = i;
    }
    const Mode& mode = pool.modes[l.mode];
    for (int s = 0; s + 1 < static_cast<int>(r.stops.size()); ++s) {
      CgnArc a;
      a.kind = ArcKind::kTravel;
      a.tail = g.line_nodes[l.id][s];
      a.head = g.line_nodes[l.id][s + 1];
      a.minutes = seg[s];
      a.line = l.id;
      a.pax_cap = mode.passenger_capacity;
      a.freight_cap = mode.freight_capacity;
      int from_pos = pos_of_station[r.stops[s]];
      int to_pos = pos_of_station[r.stops[s + 1]];
      for (int p = from_pos; p < to_pos; ++p) a.tracks.push_back(r.tracks[p]);
      g.line_arcs[l.id].push_back(static_cast<int>(g.arcs.size()));
      g.arcs.push_back(std::move(a));
    }
  }

  // Board/alight arcs per (station, period, stopping line), interleaved.
  for (int i = 0; i < g.n_stations; ++i) {
    for (int t = 0; t < g.n_periods; ++t) {
      for (const Line& l : pool.lines) {
        if (l.period != t) continue;
        const LineRoute& r = pool.routes[l.route];
        for (int s = 0; s < static_cast<int>(r.stops.size()); ++s) {
          if (r.stops[s] != i) continue;
          const Mode& mode = pool.modes[l.mode];
          CgnArc board;
          board.kind = ArcKind::kBoard;
          board.tail = g.station_node(i, t);
          board.head = g.line_nodes[l.id][s];
          board.minutes = params.transfer_min;
          board.line = l.id;
          board.pax_cap = mode.passenger_capacity;
          board.freight_cap = mode.freight_capacity;
          g.arcs.push_back(std::move(board));
          CgnArc alight;
          alight.kind = ArcKind::kAlight;
          alight.tail = g.line_nodes[l.id][s];
          alight.head = g.station_node(i, t);
          alight.minutes = 0;
          alight.line = l.id;
          alight.pax_cap = mode.passenger_capacity;
          alight.freight_cap = mode.freight_capacity;
          g.arcs.push_back(std::move(alight));
        }
      }
    }
  }

  // Interperiod arcs (freight only), optionally restricted to stations on
  // at least two distinct routes of the pool.
  std::vector<char> take(g.n_stations, 1);
  if (params.interperiod_at_transfers_only) {
    std::vector<std::set<int>> routes_at(g.n_stations);
    for (const LineRoute& r : pool.routes) {
      for (int s : r.stops) routes_at[s].insert(r.id);
    }
    for (int i = 0; i < g.n_stations; ++i) {
      take[i] = routes_at[i].size() >= 2 ? 1 : 0;
    }
  }
  for (int i = 0; i < g.n_stations; ++i) {
    if (!take[i]) continue;
    for (int t = 0; t + 1 < g.n_periods; ++t) {
      CgnArc a;
      a.kind = ArcKind::kInterperiod;
      a.tail = g.station_node(i, t);
      a.head = g.station_node(i, t + 1);
      a.minutes = net.periods[t].minutes();
      g.arcs.push_back(std::move(a));
    }
  }

  g.out.resize(g.nodes.size());
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    g.out[g.arcs[a].tail].push_back(a);
  }
  return g;
}

std::string dump_cgn(const PhysicalNetwork& net, const LinePool& pool,
                     const ChangeGoNetwork& g) {
  std::ostringstream os;
  os << "cgn stations=" << g.n_stations << " periods=" << g.n_periods
     << " lines=" << pool.lines.size() << " nodes=" << g.nodes.size()
     << " arcs=" << g.arcs.size() << "\n";
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    const CgnNode& n = g.nodes[i];
    if (n.kind == NodeKind::kTravel) {
      os << "node " << i << " travel line=" << n.line
         << " station=" << net.stations[n.station].id << " period=" << n.period
         << "\n";
    } else {
      os << "node " << i << " station station=" << net.stations[n.station].id
         << " period=" << n.period << "\n";
    }
  }
  for (int i = 0; i < static_cast<int>(g.arcs.size()); ++i) {
    const CgnArc& a = g.arcs[i];
    switch (a.kind) {
      case ArcKind::kTravel: {
        os << "arc " << i << " travel line=" << a.line << " tail=" << a.tail
           << " head=" << a.head << " "
           << net.stations[g.nodes[a.tail].station].id << "->"
           << net.stations[g.nodes[a.head].station].id
           << " minutes=" << a.minutes << " pax=" << a.pax_cap
           << " frt=" << a.freight_cap << " tracks=";
        for (int k = 0; k < static_cast<int>(a.tracks.size()); ++k) {
          if (k) os << ",";
          const Track& tr = net.tracks[a.tracks[k]];
          os << net.stations[tr.u].id << "-" << net.stations[tr.v].id;
        }
        os << "\n";
        break;
      }
      case ArcKind::kBoard:
        os << "arc " << i << " board station="
           << net.stations[g.nodes[a.tail].station].id
           << " period=" << g.nodes[a.tail].period << " line=" << a.line
           << " tail=" << a.tail << " head=" << a.head
           << " minutes=" << a.minutes << "\n";
        break;
      case ArcKind::kAlight:
        os << "arc " << i << " alight station="
           << net.stations[g.nodes[a.head].station].id
           << " period=" << g.nodes[a.head].period << " line=" << a.line
           << " tail=" << a.tail << " head=" << a.head
           << " minutes=" << a.minutes << "\n";
        break;
      case ArcKind::kInterperiod:
        os << "arc " << i << " interperiod station="
           << net.stations[g.nodes[a.tail].station].id
           << " from=" << g.nodes[a.tail].period
           << " to=" << g.nodes[a.head].period << " tail=" << a.tail
           << " head=" << a.head << " minutes=" << a.minutes << "\n";
        break;
    }
  }
  os << "summary travel_nodes=" << g.count(NodeKind::kTravel)
     << " station_nodes=" << g.count(NodeKind::kStation)
     << " travel_arcs=" << g.count(ArcKind::kTravel)
     << " board_arcs=" << g.count(ArcKind::kBoard)
     << " alight_arcs=" << g.count(ArcKind::kAlight)
     << " interperiod_arcs=" << g.count(ArcKind::kInterperiod) << "\n";
  return os.str();
}

bool arc_allowed(const ChangeGoNetwork& cgn, const CgnArc& arc, DemandKind kind,
                 int period, const LineMask* mask) {
  if (arc.kind == ArcKind::kInterperiod) {
    return kind == DemandKind::kFreight;
  }
  if (mask != nullptr && mask->is_removed(arc.line)) return false;
  // A commodity can only ride lines whose mode carries it.
  double cap = kind == DemandKind::kPassenger ? arc.pax_cap : arc.freight_cap;
  if (cap <= 0.0) return false;
  if (kind == DemandKind::kPassenger &&
      cgn.nodes[arc.kind == ArcKind::kBoard ? arc.head : arc.tail].period !=
          period) {
    return false;
  }
  return true;
}

int path_duration(const ChangeGoNetwork& cgn, const std::vector<int>& arcs) {
  int total = 0;
  bool counting = cgn.params.count_initial_access;
  for (int a : arcs) {
    const CgnArc& arc = cgn.arcs[a];
    // Duration starts accruing once the path reaches its first travel node:
    // the board arc onto the first train and any access wait before it are
    // not part of the journey time.
    if (counting) {
      total += arc.minutes;
    } else if (arc.kind == ArcKind::kBoard || arc.kind == ArcKind::kTravel) {
      counting = true;
      if (arc.kind == ArcKind::kTravel) total += arc.minutes;
    }
  }
  return total;
}

std::vector<AccessSeed> access_seeds(const ChangeGoNetwork& cgn, int origin,
                                     DemandKind kind, int period,
                                     const LineMask* mask) {
  std::vector<AccessSeed> seeds;
  const bool count_access = cgn.params.count_initial_access;
  std::vector<int> start_periods;
  if (kind == DemandKind::kPassenger) {
    start_periods.push_back(period);
  } else {
    for (int t = 0; t < cgn.n_periods; ++t) start_periods.push_back(t);
  }
  std::vector<int> prefix;
  int prefix_minutes = 0;
  int prev_station_node = cgn.station_node(
      origin, kind == DemandKind::kFreight ? 0 : period);
  for (int t : start_periods) {
    int sn = cgn.station_node(origin, t);
    if (kind == DemandKind::kFreight && t > 0) {
      // Extend the interperiod chain (o,0) -> ... -> (o,t) if the arc exists.
      bool found = false;
      for (int a : cgn.out[prev_station_node]) {
        const CgnArc& arc = cgn.arcs[a];
        if (arc.kind == ArcKind::kInterperiod && arc.head == sn) {
          prefix.push_back(a);
          if (count_access) prefix_minutes += arc.minutes;
          found = true;
          break;
        }
      }
      if (!found) break;  // no interperiod chain at this station
      prev_station_node = sn;
    }
    for (int a : cgn.out[sn]) {
      const CgnArc& arc = cgn.arcs[a];
      if (arc.kind != ArcKind::kBoard) continue;
      if (!arc_allowed(cgn, arc, kind, period, mask)) continue;
      AccessSeed s;
      s.prefix = prefix;
      s.prefix.push_back(a);
      s.node = arc.head;
      s.minutes = prefix_minutes + (count_access ? arc.minutes : 0);
      seeds.push_back(std::move(s));
    }
  }
  return seeds;
}

std::optional<TimedPath> min_travel_time(const ChangeGoNetwork& cgn, int origin,
                                         int destination, DemandKind kind,
                                         int period, const LineMask* mask) {
  const int n = static_cast<int>(cgn.nodes.size());
  std::vector<long long> dist(n, std::numeric_limits<long long>::max());
  std::vector<int> parent_arc(n, -1);
  std::vector<int> seed_of(n, -1);

  std::vector<AccessSeed> seeds = access_seeds(cgn, origin, kind, period, mask);
  using Item = std::pair<long long, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    const AccessSeed& s = seeds[i];
    if (static_cast<long long>(s.minutes) < dist[s.node]) {
      dist[s.node] = s.minutes;
      seed_of[s.node] = i;
      parent_arc[s.node] = -1;
      pq.push({dist[s.node], s.node});
    }
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (int a : cgn.out[u]) {
      const CgnArc& arc = cgn.arcs[a];
      if (!arc_allowed(cgn, arc, kind, period, mask)) continue;
      long long nd = du + arc.minutes;
      if (nd < dist[arc.head]) {
        dist[arc.head] = nd;
        parent_arc[arc.head] = a;
        seed_of[arc.head] = -1;
        pq.push({nd, arc.head});
      }
    }
  }

  // Best sink: station node (d, t) — the demand's period for passengers,
  // any period for freight.
  std::vector<int> sinks;
  if (kind == DemandKind::kPassenger) {
    sinks.push_back(cgn.station_node(destination, period));
  } else {
    for (int t = 0; t < cgn.n_periods; ++t) {
      sinks.push_back(cgn.station_node(destination, t));
    }
  }
  int best = -1;
  for (int s : sinks) {
    if (dist[s] == std::numeric_limits<long long>::max()) continue;
    if (best == -1 || dist[s] < dist[best]) best = s;
  }
  if (best == -1) return std::nullopt;

  TimedPath tp;
  tp.minutes = static_cast<int>(dist[best]);
  int u = best;
  std::vector<int> rev;
  while (parent_arc[u] != -1) {
    rev.push_back(parent_arc[u]);
    u = cgn.arcs[parent_arc[u]].tail;
  }
  const AccessSeed& seed = seeds[seed_of[u]];
  tp.arcs = seed.prefix;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) tp.arcs.push_back(*it);
  return tp;
}

std::vector<RoutedDemand> prepare_demands(
    const ChangeGoNetwork& cgn, const std::vector<DemandEntry>& demands) {
  std::vector<RoutedDemand> out;
  for (int i = 0; i < static_cast<int>(demands.size()); ++i) {
    RoutedDemand rd;
    rd.entry = demands[i];
    rd.index = i;
    const bool pax = rd.entry.kind == DemandKind::kPassenger;
    rd.source_node =
        cgn.station_node(rd.entry.origin, pax ? rd.entry.period : 0);
    if (pax) {
      rd.sink_nodes.push_back(
          cgn.station_node(rd.entry.destination, rd.entry.period));
    } else {
      for (int t = 0; t < cgn.n_periods; ++t) {
        rd.sink_nodes.push_back(cgn.station_node(rd.entry.destination, t));
      }
    }
    auto tp = min_travel_time(cgn, rd.entry.origin, rd.entry.destination,
                              rd.entry.kind, rd.entry.period);
    if (tp.has_value()) {
      rd.servable = true;
      rd.min_minutes = tp->minutes;
      double factor = pax ? cgn.params.passenger_detour_factor
                          : cgn.params.freight_detour_factor;
      rd.threshold_min = factor * tp->minutes;
      rd.min_path_arcs = std::move(tp->arcs);
    }
    out.push_back(std::move(rd));
  }
  return out;
}

PathCheck path_rules(const ChangeGoNetwork& cgn, const RoutedDemand& demand,
                     const std::vector<int>& arcs) {
  PathCheck bad;
  bad.ok = false;
  if (arcs.empty()) {
    bad.rule = "chain";
    bad.detail = "empty arc sequence";
    return bad;
  }
  for (int a : arcs) {
    if (a < 0 || a >= static_cast<int>(cgn.arcs.size())) {
      bad.rule = "chain";
      bad.detail = "arc id out of range";
      return bad;
    }
  }
  for (int i = 0; i + 1 < static_cast<int>(arcs.size()); ++i) {
    if (cgn.arcs[arcs[i]].head != cgn.arcs[arcs[i + 1]].tail) {
      bad.rule = "chain";
      bad.detail = "arcs do not form a connected walk";
      return bad;
    }
  }

  // (a) simple
  std::vector<int> visited{cgn.arcs[arcs.front()].tail};
  for (int a : arcs) visited.push_back(cgn.arcs[a].head);
  std::vector<int> sorted = visited;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    bad.rule = "a";
    bad.detail = "repeated node";
    return bad;
  }

  // (b) endpoints
  if (visited.front() != demand.source_node) {
    bad.rule = "b";
    bad.detail = "path does not start at the demand source node";
    return bad;
  }
  if (std::find(demand.sink_nodes.begin(), demand.sink_nodes.end(),
                visited.back()) == demand.sink_nodes.end()) {
    bad.rule = "b";
    bad.detail = "path does not end at a destination station node";
    return bad;
  }

  // (c) period confinement for passengers
  if (demand.entry.kind == DemandKind::kPassenger) {
    for (int a : arcs) {
      if (cgn.arcs[a].kind == ArcKind::kInterperiod) {
        bad.rule = "c";
        bad.detail = "passenger path uses a freight-only arc";
        return bad;
      }
    }
    for (int v : visited) {
      if (cgn.nodes[v].period != demand.entry.period) {
        bad.rule = "c";
        bad.detail = "passenger path leaves its period";
        return bad;
      }
    }
  }

  // (d) interperiod arcs step forward one period
  for (int a : arcs) {
    const CgnArc& arc = cgn.arcs[a];
    if (arc.kind == ArcKind::kInterperiod &&
        cgn.nodes[arc.head].period != cgn.nodes[arc.tail].period + 1) {
      bad.rule = "d";
      bad.detail = "interperiod arc does not advance one period";
      return bad;
    }
  }

  // (e) duration threshold
  int minutes = path_duration(cgn, arcs);
  if (minutes > demand.threshold_min + 1e-9) {
    bad.rule = "e";
    bad.detail = "duration " + std::to_string(minutes) + " exceeds threshold";
    return bad;
  }
  return PathCheck{};
}

}  // namespace raillp
