#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raillp/line_pool.hpp"
#include "raillp/params.hpp"
#include "raillp/physical_model.hpp"
#include "raillp/types.hpp"

namespace raillp {

enum class NodeKind { kTravel, kStation };
enum class ArcKind { kTravel, kBoard, kAlight, kInterperiod };

struct CgnNode {
  NodeKind kind = NodeKind::kStation;
  int station = -1;
  int period = -1;   // line's period for travel nodes
  int line = -1;     // travel nodes only
  int stop_pos = -1; // index into the line's stop sequence
};

struct CgnArc {
  ArcKind kind = ArcKind::kTravel;
  int tail = -1;
  int head = -1;
  int minutes = 0;
  int line = -1;                 // travel/board/alight arcs
  double pax_cap = 0.0;          // travel arcs: capacity per unit frequency
  double freight_cap = 0.0;
  std::vector<int> tracks;       // travel arcs: spanned track indices
};

// Period-extended change&go-network. Travel nodes come first (grouped by
// line, stops in order), then station nodes (station-major, period-minor).
// Arcs: travel (line-major), then board/alight interleaved per
// (station, period, line), then interperiod (station-major).
struct ChangeGoNetwork {
  ModelParams params;
  int n_stations = 0;
  int n_periods = 0;
  std::vector<CgnNode> nodes;
  std::vector<CgnArc> arcs;
  std::vector<std::vector<int>> out;         // arc ids by tail node
  std::vector<int> station_node_of;          // station * n_periods + period
  std::vector<std::vector<int>> line_nodes;  // line -> travel node ids
  std::vector<std::vector<int>> line_arcs;   // line -> travel arc ids

  int station_node(int station, int period) const {
    return station_node_of[station * n_periods + period];
  }
  int count(ArcKind k) const;
  int count(NodeKind k) const;
};

ChangeGoNetwork build_cgn(const PhysicalNetwork& net, const LinePool& pool,
                          const ModelParams& params);

// Deterministic node/arc listing for golden-file comparisons and `inspect`.
std::string dump_cgn(const PhysicalNetwork& net, const LinePool& pool,
                     const ChangeGoNetwork& cgn);

// Subset of lines temporarily removed from routing (diving acceleration).
// Empty `removed` means nothing is masked.
struct LineMask {
  std::vector<char> removed;
  bool is_removed(int line) const {
    return !removed.empty() && removed[line] != 0;
  }
};

// Whether a demand of `kind` departing in `period` (-1 for freight) may use
// the arc. Passengers stay inside their own period and never ride
// interperiod arcs; freight may use everything.
bool arc_allowed(const ChangeGoNetwork& cgn, const CgnArc& arc,
                 DemandKind kind, int period, const LineMask* mask);

// Counted duration of an arc path: minutes accrue only from the first travel
// node onward unless params.count_initial_access is set.
int path_duration(const ChangeGoNetwork& cgn, const std::vector<int>& arcs);

// A zero-cost way into the network from an origin: station node, leading
// interperiod hops (freight only), then one board arc onto a travel node.
// `minutes` is the counted duration of that prefix (zero unless
// count_initial_access is set).
struct AccessSeed {
  int node = -1;
  std::vector<int> prefix;
  int minutes = 0;
};
std::vector<AccessSeed> access_seeds(const ChangeGoNetwork& cgn, int origin,
                                     DemandKind kind, int period,
                                     const LineMask* mask);

// A demand prepared for routing: source/sink nodes, minimum travel time and
// the derived duration threshold. Unservable demands (no path) keep
// servable=false and take no further part in optimization.
struct RoutedDemand {
  DemandEntry entry;
  int index = -1;            // position in the instance demand list
  bool servable = false;
  int source_node = -1;      // (o, t) for passengers, (o, 0) for freight
  std::vector<int> sink_nodes;
  int min_minutes = 0;
  double threshold_min = 0.0;
  std::vector<int> min_path_arcs;  // a minimum-duration path (initial column)
};

std::vector<RoutedDemand> prepare_demands(const ChangeGoNetwork& cgn,
                                          const std::vector<DemandEntry>& demands);

// Minimum counted travel time and a realizing path; empty if unreachable.
struct TimedPath {
  int minutes = 0;
  std::vector<int> arcs;
};
std::optional<TimedPath> min_travel_time(const ChangeGoNetwork& cgn, int origin,
                                         int destination, DemandKind kind,
                                         int period,
                                         const LineMask* mask = nullptr);

// Path admissibility for a demand. Rules checked, in order:
//   (a) walk is connected and simple (no repeated node),
//   (b) endpoints are the demand's source / a valid sink station node,
//   (c) passenger paths stay in the demand's period and avoid
//       freight-only arcs,
//   (d) interperiod arcs step forward exactly one period,
//   (e) counted duration <= threshold.
struct PathCheck {
  bool ok = true;
  std::string rule;    // "a".."e" or "chain" for malformed arc sequences
  std::string detail;
};
PathCheck path_rules(const ChangeGoNetwork& cgn, const RoutedDemand& demand,
                     const std::vector<int>& arcs);

}  // namespace raillp
