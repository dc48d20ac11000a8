#include "raillp/instance_gen.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <utility>

namespace raillp {

namespace {

// Fraction of all ordered OD pairs covered at each demand level, expressed
// against the 552 ordered pairs of the built-in 24-station network so that
// the built-in counts come out at 100, 150, ..., 500, 552.
constexpr std::array<int, 10> kLevelPairs = {100, 150, 200, 250, 300,
                                             350, 400, 450, 500, 552};
constexpr int kLevelPairsBase = 552;

constexpr double kPassengerShare = 0.70;
constexpr double kPassengerBand = 0.10;  // +-10%
constexpr double kFreightBand = 0.05;    // +-5%
constexpr double kUnitsPerCarriage = 100.0;
constexpr double kPassengerFarePerKm = 0.7;
constexpr double kFreightFarePerKm = 0.2;

Station make_station(const std::string& id, StationClass cls, bool terminal) {
  Station s;
  s.id = id;
  s.name = id;
  s.cls = cls;
  s.is_terminal = terminal;
  return s;
}

}  // namespace

PhysicalNetwork medium_network() {
  PhysicalNetwork net;
  const StationClass M = StationClass::kMajor;
  const StationClass I = StationClass::kIntermediate;
  const StationClass S = StationClass::kSmall;
  const StationClass N = StationClass::kMinor;

  // 16-station spine s01..s16 with two 4-station branches hanging off the
  // junctions s06 and s11. Terminals sit at the four leaf ends.
  struct Def {
    const char* id;
    StationClass cls;
    bool terminal;
  };
  const Def defs[] = {
      {"s01", M, true},  {"s02", S, false}, {"s03", N, false},
      {"s04", S, false}, {"s05", S, false}, {"s06", I, false},
      {"s07", S, false}, {"s08", M, false}, {"s09", S, false},
      {"s10", N, false}, {"s11", I, false}, {"s12", I, false},
      {"s13", S, false}, {"s14", N, false}, {"s15", S, false},
      {"s16", M, true},  {"s17", S, false}, {"s18", S, false},
      {"s19", N, false}, {"s20", M, true},  {"s21", S, false},
      {"s22", N, false}, {"s23", S, false}, {"s24", M, true},
  };
  for (const Def& d : defs) {
    net.stations.push_back(make_station(d.id, d.cls, d.terminal));
  }

  auto track = [&net](int u, int v, double km) {
    Track t;
    t.u = u;
    t.v = v;
    t.km = km;
    net.tracks.push_back(t);
  };
  // Spine s01..s16 (indices 0..15).
  const double spine_km[] = {55, 30, 45, 25, 40, 35, 50, 30,
                             25, 45, 40, 35, 30, 25, 60};
  for (int i = 0; i < 15; ++i) track(i, i + 1, spine_km[i]);
  // Branch from s06 (index 5): s17 s18 s19 s20 (indices 16..19).
  track(5, 16, 30);
  track(16, 17, 35);
  track(17, 18, 25);
  track(18, 19, 50);
  // Branch from s11 (index 10): s21 s22 s23 s24 (indices 20..23).
  track(10, 20, 40);
  track(20, 21, 30);
  track(21, 22, 35);
  track(22, 23, 45);

  Period p0{"morning", 6.0, 10.0};
  Period p1{"midday", 10.0, 14.0};
  Period p2{"evening", 14.0, 18.0};
  net.periods = {p0, p1, p2};
  return net;
}

double expected_carriages(StationClass a, StationClass b) {
  static const double table[4][4] = {
      // major  intermediate  small  minor
      {24, 20, 16, 12},  // major
      {20, 16, 12, 8},   // intermediate
      {16, 12, 8, 4},    // small
      {12, 8, 4, 2},     // minor
  };
  return table[static_cast<int>(a)][static_cast<int>(b)];
}

std::vector<long long> allocate_periods(long long total, double ratio) {
  if (ratio <= 0.0) throw RaillpError("allocate_periods: ratio must be > 0");
  if (total < 0) throw RaillpError("allocate_periods: negative total");
  const double denom = 2.0 * ratio + 1.0;
  const double prop[3] = {ratio / denom, 1.0 / denom, ratio / denom};

  std::vector<long long> out(3, 0);
  double frac[3];
  long long used = 0;
  for (int i = 0; i < 3; ++i) {
    double share = static_cast<double>(total) * prop[i];
    out[i] = static_cast<long long>(std::floor(share));
    frac[i] = share - static_cast<double>(out[i]);
    used += out[i];
  }
  long long left = total - used;
  // Largest remainder; ties go to the earlier period.
  int order[3] = {0, 1, 2};
  std::stable_sort(order, order + 3,
                   [&](int x, int y) { return frac[x] > frac[y] + 1e-12; });
  for (int k = 0; k < 3 && left > 0; ++k, --left) out[order[k]] += 1;
  return out;
}

Instance generate_instance(const PhysicalNetwork& net, std::uint64_t seed,
                           int level, double ratio) {
  if (level < 1 || level > 10) {
    throw RaillpError("generate: level must be in 1..10");
  }
  if (ratio <= 0.0) throw RaillpError("generate: ratio must be > 0");
  if (net.periods.size() != 3) {
    throw RaillpError(
        "generate: demand generation needs exactly 3 periods "
        "(morning peak, off-peak, evening peak)");
  }
  {
    auto viol = validate_network(net);
    if (!viol.empty()) {
      throw RaillpError("generate: invalid network: " + viol.front().code +
                        " (" + viol.front().detail + ")");
    }
  }

  const int n = static_cast<int>(net.stations.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int o = 0; o < n; ++o) {
    for (int d = 0; d < n; ++d) {
      if (o != d) pairs.emplace_back(o, d);
    }
  }
  const long long total_pairs = static_cast<long long>(pairs.size());
  if (total_pairs == 0) throw RaillpError("generate: no OD pairs");

  long long want = round_half_up(static_cast<double>(total_pairs) *
                                 kLevelPairs[level - 1] / kLevelPairsBase);
  want = std::clamp<long long>(want, 1, total_pairs);

  // Partial Fisher-Yates draw without replacement, then restore (o, d)
  // order so the emitted records are canonical.
  SplitMix64 master(derive_seed(seed, 0x0dca1ULL));
  for (long long i = 0; i < want; ++i) {
    long long j =
        i + static_cast<long long>(master.below(
                static_cast<std::uint64_t>(total_pairs - i)));
    std::swap(pairs[static_cast<std::size_t>(i)],
              pairs[static_cast<std::size_t>(j)]);
  }
  pairs.resize(static_cast<std::size_t>(want));
  std::sort(pairs.begin(), pairs.end());

  Instance inst;
  inst.net = net;
  for (auto [o, d] : pairs) {
    auto dist = shortest_physical_distance(net, o, d);
    if (!dist) continue;  // unreachable pair: nothing to generate

    const double expected =
        expected_carriages(net.stations[o].cls, net.stations[d].cls);
    const double mean_pax = kPassengerShare * expected;
    const double mean_frt = (1.0 - kPassengerShare) * expected;

    // Carriages stay fractional until the units conversion; the draw is
    // uniform inside the +-band around the mean.
    SplitMix64 rng(derive_seed(seed, 1, static_cast<std::uint64_t>(o),
                               static_cast<std::uint64_t>(d)));
    const double pax_carriages =
        rng.uniform(mean_pax * (1.0 - kPassengerBand),
                    mean_pax * (1.0 + kPassengerBand));
    const double frt_carriages = rng.uniform(
        mean_frt * (1.0 - kFreightBand), mean_frt * (1.0 + kFreightBand));
    const long long pax_units = round_half_up(pax_carriages * kUnitsPerCarriage);
    const long long frt_units = round_half_up(frt_carriages * kUnitsPerCarriage);

    std::vector<long long> slices = allocate_periods(pax_units, ratio);
    for (int t = 0; t < 3; ++t) {
      if (slices[t] <= 0) continue;
      DemandEntry e;
      e.kind = DemandKind::kPassenger;
      e.origin = o;
      e.destination = d;
      e.period = t;
      e.quantity = static_cast<double>(slices[t]);
      e.unit_revenue = kPassengerFarePerKm * *dist;
      inst.demands.push_back(e);
    }
    if (frt_units > 0) {
      DemandEntry e;
      e.kind = DemandKind::kFreight;
      e.origin = o;
      e.destination = d;
      e.period = -1;
      e.quantity = static_cast<double>(frt_units);
      e.unit_revenue = kFreightFarePerKm * *dist;
      inst.demands.push_back(e);
    }
  }
  return inst;
}

}  // namespace raillp
