#include "macsi/policy_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "macsi/errors.hpp"
#include "macsi/information.hpp"
#include "macsi/rng.hpp"

namespace macsi {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a == kSaturated || b == kSaturated) return kSaturated;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

// C(m + k - 1, k - 1): compositions of m into k nonnegative parts.
std::uint64_t composition_count(int m, int k) {
  std::uint64_t num = 1;
  for (int i = 1; i <= k - 1; ++i) {
    // multiply by (m + i) / i, keeping the running value integral
    num = sat_mul(num, static_cast<std::uint64_t>(m + i));
    if (num == kSaturated) return kSaturated;
    num /= static_cast<std::uint64_t>(i);
  }
  return num;
}

// Lexicographic successor of a composition with fixed sum; false when at the
// last one (all mass in the first part).
bool next_composition(std::vector<int>& c) {
  const int k = static_cast<int>(c.size());
  int j = -1;
  for (int i = k - 1; i >= 1; --i) {
    if (c[static_cast<std::size_t>(i)] > 0) {
      j = i;
      break;
    }
  }
  if (j < 0) return false;
  const int s = c[static_cast<std::size_t>(j)];
  c[static_cast<std::size_t>(j)] = 0;
  c[static_cast<std::size_t>(j - 1)] += 1;
  c[static_cast<std::size_t>(k - 1)] = s - 1;
  return true;
}

std::vector<int> first_composition(int m, int k) {
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  c.back() = m;
  return c;
}

std::vector<double> random_simplex_row(Rng& rng, int k) {
  std::vector<double> row(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& v : row) {
    v = rng.exponential();
    sum += v;
  }
  if (sum == 0.0) return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
  for (double& v : row) v /= sum;
  return row;
}

TeamPolicy random_policy(const MacModel& m, Rng& rng) {
  TeamPolicy p;
  p.pi_a.reserve(static_cast<std::size_t>(m.obs_size_a));
  for (int v = 0; v < m.obs_size_a; ++v)
    p.pi_a.push_back(random_simplex_row(rng, m.input_size_a));
  p.pi_b.reserve(static_cast<std::size_t>(m.obs_size_b));
  for (int v = 0; v < m.obs_size_b; ++v)
    p.pi_b.push_back(random_simplex_row(rng, m.input_size_b));
  return p;
}

void validate_config(const SearchConfig& cfg) {
  if (cfg.grid_resolution < 1)
    throw ValidationError("search config: grid_resolution must be >= 1");
  if (cfg.sample_count < 0)
    throw ValidationError("search config: sample_count must be >= 0");
  if (cfg.restarts < 1) throw ValidationError("search config: restarts must be >= 1");
  if (!(cfg.ascent_tol > 0.0))
    throw ValidationError("search config: ascent_tol must be positive");
  if (cfg.max_iters < 1) throw ValidationError("search config: max_iters must be >= 1");
}

// Pentagon of the policy without re-validating the model on every call.
Pentagon pentagon_unchecked(const MacModel& m, const TeamPolicy& pi) {
  const JointDistribution joint = build_joint(m, pi);
  return Pentagon(cond_mutual_info(joint, {Var::Xa}, {Var::Y}, {Var::Xb, Var::S}),
                  cond_mutual_info(joint, {Var::Xb}, {Var::Y}, {Var::Xa, Var::S}),
                  cond_mutual_info(joint, {Var::Xa, Var::Xb}, {Var::Y}, {Var::S}));
}

double weighted_support(const MacModel& m, const TeamPolicy& pi, double la, double lb) {
  const Pentagon p = pentagon_unchecked(m, pi);
  double best = 0.0;
  for (const RatePair& c : p.corners())
    best = std::max(best, la * c.ra + lb * c.rb);
  return best;
}

// Greedy pattern search over one encoder's conditionals: convex steps toward
// simplex corners with halving step sizes. Returns the (monotone) final value.
double ascend_side(const MacModel& m, TeamPolicy& pi, Side side, double la, double lb,
                   double current) {
  Conditional& cond = pi.side(side);
  const int inputs = m.input_size(side);
  for (double step = 0.5; step >= 1.0 / 1024.0; step *= 0.5) {
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps++ < 200) {
      improved = false;
      for (std::size_t v = 0; v < cond.size(); ++v) {
        for (int x = 0; x < inputs; ++x) {
          const std::vector<double> saved = cond[v];
          double sum = 0.0;
          for (int i = 0; i < inputs; ++i) {
            cond[v][static_cast<std::size_t>(i)] *= 1.0 - step;
            if (i == x) cond[v][static_cast<std::size_t>(i)] += step;
            sum += cond[v][static_cast<std::size_t>(i)];
          }
          for (double& e : cond[v]) e /= sum;  // keep the row exactly normalized
          const double candidate = weighted_support(m, pi, la, lb);
          if (candidate > current) {
            current = candidate;
            improved = true;
          } else {
            cond[v] = saved;
          }
        }
      }
    }
  }
  return current;
}

}  // namespace

std::uint64_t policy_count(const MacModel& m, int resolution) {
  if (resolution < 1) throw ValidationError("policy_count: resolution must be >= 1");
  std::uint64_t total = 1;
  const std::uint64_t per_a = composition_count(resolution, m.input_size_a);
  for (int v = 0; v < m.obs_size_a; ++v) total = sat_mul(total, per_a);
  const std::uint64_t per_b = composition_count(resolution, m.input_size_b);
  for (int v = 0; v < m.obs_size_b; ++v) total = sat_mul(total, per_b);
  return total;
}

PolicyEnumerator::PolicyEnumerator(const MacModel& model, int resolution,
                                   std::uint64_t cap)
    : resolution_(resolution),
      obs_a_(model.obs_size_a),
      obs_b_(model.obs_size_b),
      in_a_(model.input_size_a),
      in_b_(model.input_size_b) {
  ensure_valid_model(model);
  count_ = policy_count(model, resolution);
  if (count_ > cap)
    throw CapExceededError("policy enumeration: " + std::to_string(count_) +
                               " grid policies exceed cap " + std::to_string(cap),
                           count_);
  slots_.reserve(static_cast<std::size_t>(obs_a_ + obs_b_));
  for (int v = 0; v < obs_a_; ++v) slots_.push_back(first_composition(resolution_, in_a_));
  for (int v = 0; v < obs_b_; ++v) slots_.push_back(first_composition(resolution_, in_b_));
}

bool PolicyEnumerator::next(TeamPolicy& out) {
  if (done_) return false;

  out.pi_a.assign(static_cast<std::size_t>(obs_a_),
                  std::vector<double>(static_cast<std::size_t>(in_a_)));
  out.pi_b.assign(static_cast<std::size_t>(obs_b_),
                  std::vector<double>(static_cast<std::size_t>(in_b_)));
  for (int slot = 0; slot < obs_a_ + obs_b_; ++slot) write_slot(out, slot);

  // Advance the odometer; the last slot moves fastest.
  int slot = obs_a_ + obs_b_ - 1;
  while (slot >= 0) {
    if (next_composition(slots_[static_cast<std::size_t>(slot)])) break;
    const int k = slot < obs_a_ ? in_a_ : in_b_;
    slots_[static_cast<std::size_t>(slot)] = first_composition(resolution_, k);
    --slot;
  }
  if (slot < 0) done_ = true;
  return true;
}

void PolicyEnumerator::write_slot(TeamPolicy& out, int slot) const {
  const std::vector<int>& comp = slots_[static_cast<std::size_t>(slot)];
  std::vector<double>& row = slot < obs_a_
                                 ? out.pi_a[static_cast<std::size_t>(slot)]
                                 : out.pi_b[static_cast<std::size_t>(slot - obs_a_)];
  for (std::size_t i = 0; i < comp.size(); ++i)
    row[i] = static_cast<double>(comp[i]) / resolution_;
}

std::vector<TeamPolicy> sample_policies(const MacModel& model, int count,
                                        std::uint64_t seed) {
  if (count < 0) throw ValidationError("sample_policies: negative count");
  ensure_valid_model(model);
  Rng rng(seed);
  std::vector<TeamPolicy> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_policy(model, rng));
  return out;
}

AscentResult maximize_weighted_rate(const MacModel& model, double la, double lb,
                                    const SearchConfig& cfg) {
  if (!(la >= 0.0) || !(lb >= 0.0) || (la == 0.0 && lb == 0.0))
    throw ValidationError("maximize_weighted_rate: invalid weight direction");
  validate_config(cfg);
  ensure_valid_model(model);

  Rng rng(cfg.seed);
  TeamPolicy best_policy;
  double best_value = -1.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    TeamPolicy pi = r == 0 ? uniform_policy(model) : random_policy(model, rng);
    double value = weighted_support(model, pi, la, lb);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      const double before = value;
      value = ascend_side(model, pi, Side::A, la, lb, value);
      value = ascend_side(model, pi, Side::B, la, lb, value);
      if (value - before < cfg.ascent_tol) break;
    }
    if (value > best_value) {
      best_value = value;
      best_policy = pi;
    }
  }

  const Pentagon pent = pentagon_unchecked(model, best_policy);
  const Pentagon list[1] = {pent};
  const SupportResult sup = support(list, la, lb);
  return {std::move(best_policy), sup.argmax, sup.value};
}

std::vector<std::pair<double, double>> region_weight_fan() {
  std::vector<std::pair<double, double>> fan;
  fan.reserve(17);
  for (int k = 0; k <= 16; ++k) {
    if (k == 0) {
      fan.emplace_back(1.0, 0.0);
    } else if (k == 16) {
      fan.emplace_back(0.0, 1.0);
    } else {
      const double theta = static_cast<double>(k) * std::numbers::pi / 32.0;
      fan.emplace_back(std::cos(theta), std::sin(theta));
    }
  }
  return fan;
}

RegionResult capacity_region(const MacModel& model, const SearchConfig& cfg) {
  validate_config(cfg);
  ensure_valid_model(model);

  RegionResult result;
  std::vector<RatePair> points;
  auto add_pentagon = [&points](const Pentagon& p) {
    for (const RatePair& c : p.corners()) points.push_back(c);
    if (points.size() > (1u << 16)) points = convex_hull(std::move(points));
  };

  const std::uint64_t count = policy_count(model, cfg.grid_resolution);
  if (count <= kPolicyEnumerationCap) {
    result.enumerated = true;
    PolicyEnumerator en(model, cfg.grid_resolution);
    TeamPolicy pi;
    while (en.next(pi)) {
      add_pentagon(pentagon_unchecked(model, pi));
      ++result.policies_evaluated;
    }
  } else {
    result.enumerated = false;
    for (const TeamPolicy& pi : sample_policies(model, cfg.sample_count, cfg.seed)) {
      add_pentagon(pentagon_unchecked(model, pi));
      ++result.policies_evaluated;
    }
  }

  std::vector<AscentResult> ascents;
  for (const auto& [la, lb] : region_weight_fan()) {
    AscentResult a = maximize_weighted_rate(model, la, lb, cfg);
    add_pentagon(pentagon_unchecked(model, a.policy));
    ++result.policies_evaluated;
    ascents.push_back(std::move(a));
  }

  result.region = Polygon::from_points(std::move(points));

  const auto fan = region_weight_fan();
  for (std::size_t k = 0; k < fan.size(); ++k) {
    DirectionDiagnostic d;
    d.la = fan[k].first;
    d.lb = fan[k].second;
    d.hull_support = polygon_support(result.region, d.la, d.lb).value;
    d.ascent_value = ascents[k].value;
    d.gap = d.hull_support - d.ascent_value;
    result.directions.push_back(d);
  }
  return result;
}

}  // namespace macsi
