#pragma once

#include <cstdint>
#include <vector>

#include "raillp/physical_model.hpp"

namespace raillp {

struct Instance {
  PhysicalNetwork net;
  std::vector<DemandEntry> demands;
};

// The built-in 24-station network: a 16-station corridor with two branches,
// 4 terminals, station classes split 5 major / 3 intermediate / 11 small /
// 5 minor, three 4-hour periods.
PhysicalNetwork medium_network();

// Expected end-to-end carriage demand for an (origin class, destination
// class) pair; symmetric.
double expected_carriages(StationClass a, StationClass b);

// Splits `total` units across (morning peak, off-peak, evening peak) with
// proportions (R, 1, R)/(2R+1) by largest remainder; ties resolve to the
// earlier period. Slices sum to `total` exactly.
std::vector<long long> allocate_periods(long long total, double ratio);

// Samples demand records for the network:
//  - OD pair count follows the built-in level table as a fraction of all
//    ordered pairs (level 1 -> 100/552 of them, ... level 10 -> every
//    pair; matching 100, 150, ..., 500, 552 pairs on the 24-station
//    network), clamped to [1, pairs]; pairs drawn without replacement,
//  - expected carriages from the class table, split 70% passenger / 30%
//    freight, each drawn uniformly (continuous) within +-10% (passenger) /
//    +-5% (freight) of its mean, then converted at 100 units per carriage
//    with half-up rounding,
//  - passenger units allocated across the three periods by `ratio`,
//  - unit revenue = fare rate (0.7 / 0.2 per km) * shortest distance.
// Unreachable pairs and zero slices are skipped. Deterministic in `seed`
// (per-OD derived sub-seeds).
Instance generate_instance(const PhysicalNetwork& net, std::uint64_t seed,
                           int level, double ratio);

}  // namespace raillp
