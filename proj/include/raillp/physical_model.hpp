#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raillp/types.hpp"

namespace raillp {

struct Station {
  std::string id;
  std::string name;
  StationClass cls = StationClass::kMinor;
  bool is_terminal = false;
};

// Undirected physical track between two distinct stations.
struct Track {
  int u = -1;
  int v = -1;
  double km = 0.0;

  bool joins(int a, int b) const {
    return (u == a && v == b) || (u == b && v == a);
  }
};

struct Period {
  std::string id;
  double start_hour = 0.0;
  double end_hour = 0.0;

  double hours() const { return end_hour - start_hour; }
  int minutes() const { return static_cast<int>(round_half_up(hours() * 60.0)); }
};

// One demand record. Passenger demand is tied to a departure period;
// freight demand is period-free (it may ship across period boundaries).
struct DemandEntry {
  DemandKind kind = DemandKind::kPassenger;
  int origin = -1;
  int destination = -1;
  int period = -1;  // index into periods for passengers, -1 for freight
  double quantity = 0.0;
  double unit_revenue = 0.0;
};

struct PhysicalNetwork {
  std::vector<Station> stations;
  std::vector<Track> tracks;
  std::vector<Period> periods;

  std::vector<int> terminals() const;
  std::optional<int> find_station(const std::string& id) const;
  std::optional<int> find_period(const std::string& id) const;
  std::optional<int> find_track(int a, int b) const;

  // Adjacency as (neighbor station, track index) pairs, built on demand.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

struct Violation {
  std::string code;
  std::string detail;
};

// Structural checks: distinct track endpoints, valid indices, >= 2 terminals,
// contiguous ordered periods, and every station reachable from every terminal.
std::vector<Violation> validate_network(const PhysicalNetwork& net);

// Demand records checked against the network: endpoints exist and differ,
// passenger period valid, freight period absent, positive quantity and
// nonnegative revenue.
std::vector<Violation> validate_demands(const PhysicalNetwork& net,
                                        const std::vector<DemandEntry>& demands);

// Shortest physical distance in km over the track graph; empty if unreachable.
std::optional<double> shortest_physical_distance(const PhysicalNetwork& net,
                                                 int origin, int destination);

}  // namespace raillp
