#pragma once

#include <string>
#include <vector>

#include "raillp/params.hpp"
#include "raillp/physical_model.hpp"
#include "raillp/types.hpp"

namespace raillp {

// Service mode: how a carriage set splits its space between commodities.
struct Mode {
  std::string id;
  double passenger_capacity = 0.0;  // units per frequency
  double freight_capacity = 0.0;
};

// A directed route between two terminals together with its stop pattern.
// `path` is the full station sequence traversed; `stops` the scheduled stops
// (subset of path, always including both endpoints); `tracks` the traversed
// track indices, aligned with consecutive `path` entries.
struct LineRoute {
  int id = -1;
  std::vector<int> path;
  std::vector<int> stops;
  std::vector<int> tracks;
  StopScheme scheme = StopScheme::kAllStations;
};

// A line = route operated in one period with one mode.
struct Line {
  int id = -1;
  int route = -1;
  int period = -1;
  int mode = -1;
  int duration_min = 0;  // end-to-end scheduled duration
  double cost = 0.0;     // operating cost per unit frequency
};

struct LinePool {
  std::vector<LineRoute> routes;
  std::vector<Mode> modes;
  std::vector<Line> lines;
};

// All simple terminal-to-terminal directed paths, crossed with the requested
// stop schemes, deduplicated (a two-stop route is identical under both
// schemes), sorted lexicographically by station path then scheme.
// Throws RaillpError("pool too large") past `params.route_cap`.
std::vector<LineRoute> enumerate_routes(const PhysicalNetwork& net,
                                        const std::vector<StopScheme>& schemes,
                                        const ModelParams& params);

// Minutes of each travel segment between consecutive scheduled stops:
// running time of the spanned tracks (half-up rounded per track) plus dwell
// at the departing stop when it is an intermediate scheduled stop.
std::vector<int> segment_minutes(const PhysicalNetwork& net,
                                 const LineRoute& route,
                                 const ModelParams& params);

// Cartesian product routes x periods x modes with per-line duration and cost
// (cost = line_cost_per_hour * duration in hours).
LinePool build_pool(const PhysicalNetwork& net,
                    std::vector<LineRoute> routes,
                    const std::vector<Mode>& modes,
                    const ModelParams& params);

// Human-readable pool dump, one record per line, deterministic order.
std::string dump_pool(const PhysicalNetwork& net, const LinePool& pool);

}  // namespace raillp
