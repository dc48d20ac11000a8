#pragma once

namespace raillp {

// Model-building parameters shared by the network construction, pricing and
// master problem. Defaults are the operating assumptions used throughout.
struct ModelParams {
  double speed_kmh = 300.0;        // cruising speed used for running times
  int dwell_min = 6;               // dwell charged per intermediate stop
  int transfer_min = 30;           // board-arc duration (transfer/initial wait)
  bool interperiod_at_transfers_only = false;  // restrict interperiod arcs
  bool count_initial_access = false;  // include access arcs before first ride
  double passenger_detour_factor = 1.5;  // threshold = factor * min time
  double freight_detour_factor = 3.0;
  double line_cost_per_hour = 30000.0;  // operating cost per line-hour
  double throughput_per_hour = 6.0;     // track capacity, trains per hour
  bool throughput_joint_directions = true;  // one cap for both directions
  int route_cap = 20000;           // enumeration guard rail
  double carriage_units = 100.0;   // demand units per carriage
};

// Column-generation controls.
struct ColgenConfig {
  bool early_stop = false;     // stop after `patience` non-improving rounds
  int patience = 5;            // consecutive rounds with < kImprovement gain
  int max_iterations = 100000;
  int max_columns = 2000000;
  int jobs = 1;                // pricing worker threads
  double time_limit_sec = 0.0; // 0 = unlimited; checked between iterations
};

// Heuristic controls.
struct HeuristicConfig {
  double time_limit_sec = 1800.0;  // price-and-branch budget (0 = unlimited)
  int elementary_cutoff_nodes = 512;  // pricing keeps visited sets below this
};

}  // namespace raillp
