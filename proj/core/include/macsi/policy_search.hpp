#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "macsi/model.hpp"
#include "macsi/region.hpp"

namespace macsi {

// Policies above this count are not enumerated; capacity_region falls back to
// simplex sampling instead.
inline constexpr std::uint64_t kPolicyEnumerationCap = 2'000'000;

struct SearchConfig {
  int grid_resolution = 8;    // simplex steps per conditional
  int sample_count = 2000;    // fallback sample size when enumeration is capped
  std::uint64_t seed = 1;
  int restarts = 8;           // random restarts per ascent
  double ascent_tol = 1e-6;   // bits; stop when an outer iteration gains less
  int max_iters = 64;         // outer coordinate-ascent iterations
};

// Number of grid policies at the given resolution, saturating at UINT64_MAX.
std::uint64_t policy_count(const MacModel& model, int resolution);

// Streams every team policy whose conditional entries are integer multiples of
// 1/resolution. Construction throws CapExceededError (with the count) when the
// total exceeds `cap`.
class PolicyEnumerator {
 public:
  PolicyEnumerator(const MacModel& model, int resolution,
                   std::uint64_t cap = kPolicyEnumerationCap);

  // Writes the next policy into `out`; returns false when exhausted.
  bool next(TeamPolicy& out);

  std::uint64_t count() const { return count_; }

 private:
  void write_slot(TeamPolicy& out, int slot) const;

  int resolution_;
  std::uint64_t count_;
  int obs_a_, obs_b_, in_a_, in_b_;
  // One composition (integer counts summing to resolution) per observation
  // slot; slots 0..obs_a-1 belong to encoder a, the rest to encoder b.
  std::vector<std::vector<int>> slots_;
  bool done_ = false;
};

// `count` policies with each conditional drawn uniformly from its simplex
// (normalized exponential spacings); deterministic for a fixed seed.
std::vector<TeamPolicy> sample_policies(const MacModel& model, int count,
                                        std::uint64_t seed);

struct AscentResult {
  TeamPolicy policy;
  RatePair rate;       // argmax corner of the final pentagon under the weight
  double value = 0.0;  // support of that pentagon in the weight direction
};

// Coordinate ascent on the weighted pentagon support: alternately hill-climbs
// pi_a with pi_b fixed and vice versa (convex steps toward simplex corners,
// halving step sizes), best over `restarts` initializations. Heuristic: the
// result is a certified lower bound, not a proven optimum.
AscentResult maximize_weighted_rate(const MacModel& model, double la, double lb,
                                    const SearchConfig& config);

// The 17 support directions (cos t, sin t), t = k*pi/32 for k = 0..16.
std::vector<std::pair<double, double>> region_weight_fan();

struct DirectionDiagnostic {
  double la = 0.0, lb = 0.0;
  double hull_support = 0.0;  // support of the returned region
  double ascent_value = 0.0;  // best coordinate-ascent value in this direction
  double gap = 0.0;           // hull_support - ascent_value, >= 0 up to fp
};

struct RegionResult {
  Polygon region;
  bool enumerated = false;               // false = sampling fallback
  std::uint64_t policies_evaluated = 0;  // grid/sample policies plus ascent results
  std::vector<DirectionDiagnostic> directions;
};

// Inner approximation of the capacity region: hull of the pentagons of every
// enumerated (or sampled) policy plus the 17-direction ascent results.
RegionResult capacity_region(const MacModel& model, const SearchConfig& config);

}  // namespace macsi
