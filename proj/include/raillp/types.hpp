#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace raillp {

// Central numeric tolerances. Anything that compares objectives, reduced
// costs, or constraint activities goes through these so the whole code base
// agrees on what "equal" means.
namespace tol {
inline constexpr double kFeasibility = 1e-6;   // constraint violation slack
inline constexpr double kReducedCost = 1e-6;   // pricing acceptance threshold
inline constexpr double kObjective = 1e-6;     // objective comparisons
inline constexpr double kImprovement = 1e-6;   // colgen early-stop improvement
inline constexpr double kIntegrality = 1e-6;   // |x - round(x)| for integer vars
inline constexpr double kProfitIdentity = 1e-4;  // reported profit recomputation
inline constexpr double kPivot = 1e-9;         // simplex pivot magnitude floor
}  // namespace tol

class RaillpError : public std::runtime_error {
 public:
  explicit RaillpError(const std::string& what) : std::runtime_error(what) {}
};

enum class DemandKind { kPassenger, kFreight };

inline const char* to_string(DemandKind k) {
  return k == DemandKind::kPassenger ? "passenger" : "freight";
}

enum class StationClass { kMajor, kIntermediate, kSmall, kMinor };

inline const char* to_string(StationClass c) {
  switch (c) {
    case StationClass::kMajor: return "major";
    case StationClass::kIntermediate: return "intermediate";
    case StationClass::kSmall: return "small";
    case StationClass::kMinor: return "minor";
  }
  return "?";
}

enum class StopScheme { kAllStations, kTerminalsOnly };

inline const char* to_string(StopScheme s) {
  return s == StopScheme::kAllStations ? "all_stations" : "terminals_only";
}

// Half-up rounding for nonnegative quantities (demand units, minutes).
inline long long round_half_up(double x) {
  return static_cast<long long>(std::floor(x + 0.5));
}

// SplitMix64: tiny deterministic PRNG used for all generator randomness.
// std::uniform_*_distribution is implementation-defined, so every random
// draw in the project goes through these helpers instead.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [lo, hi). 53-bit mantissa construction.
  double uniform(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  // Uniform integer in [0, n). Rejection-free modulo is fine here: n is
  // always tiny relative to 2^64, bias < 2^-50.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Stable seed derivation so parallel or reordered generation cannot change
// the stream a given entity sees.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  SplitMix64 mix(base ^ (a * 0x9e3779b97f4a7c15ULL) ^
                 (b * 0xc2b2ae3d27d4eb4fULL) ^ (c * 0x165667b19e3779f9ULL));
  return mix.next();
}

}  // namespace raillp
