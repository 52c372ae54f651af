#include "macsi/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "macsi/errors.hpp"
#include "macsi/information.hpp"

namespace macsi {

int StrategySpace::size() const {
  int n = 1;
  for (int v = 0; v < obs_size; ++v) n *= input_size;
  return n;
}

std::vector<int> StrategySpace::map_of(int index) const {
  std::vector<int> map(static_cast<std::size_t>(obs_size));
  for (int v = obs_size - 1; v >= 0; --v) {
    map[static_cast<std::size_t>(v)] = index % input_size;
    index /= input_size;
  }
  return map;
}

int StrategySpace::index_of(std::span<const int> map) const {
  int index = 0;
  for (int v = 0; v < obs_size; ++v)
    index = index * input_size + map[static_cast<std::size_t>(v)];
  return index;
}

int StrategySpace::apply(int index, int v) const {
  // u(v): strip the less significant digits (observations after v).
  for (int i = obs_size - 1; i > v; --i) index /= input_size;
  return index % input_size;
}

EquivalentMac build_equivalent_mac(const MacModel& model) {
  ensure_valid_model(model);

  EquivalentMac mac;
  mac.space_a = {model.obs_size_a, model.input_size_a};
  mac.space_b = {model.obs_size_b, model.input_size_b};
  mac.state_size = model.state_size();
  mac.output_size = model.output_size;

  for (const StrategySpace* sp : {&mac.space_a, &mac.space_b}) {
    std::uint64_t n = 1;
    for (int v = 0; v < sp->obs_size; ++v) {
      n *= static_cast<std::uint64_t>(sp->input_size);
      if (n > static_cast<std::uint64_t>(kStrategySpaceCap))
        throw CapExceededError(
            "strategy space size " + std::to_string(n) + "+ exceeds cap " +
                std::to_string(kStrategySpaceCap),
            n);
    }
  }

  const int ua = mac.space_a.size();
  const int ub = mac.space_b.size();
  mac.q = Tensor({ua, ub, mac.z_size()});
  for (int ia = 0; ia < ua; ++ia) {
    const std::vector<int> map_a = mac.space_a.map_of(ia);
    for (int ib = 0; ib < ub; ++ib) {
      const std::vector<int> map_b = mac.space_b.map_of(ib);
      for (int s = 0; s < mac.state_size; ++s) {
        const int xa = map_a[static_cast<std::size_t>(
            model.quantizer_a[static_cast<std::size_t>(s)])];
        const int xb = map_b[static_cast<std::size_t>(
            model.quantizer_b[static_cast<std::size_t>(s)])];
        const double ps = model.state_prior[static_cast<std::size_t>(s)];
        for (int y = 0; y < mac.output_size; ++y) {
          const int kidx[4] = {s, xa, xb, y};
          const int qidx[3] = {ia, ib, s * mac.output_size + y};
          mac.q.at(qidx) = ps * model.kernel.at(kidx);
        }
      }
    }
  }
  return mac;
}

ProductInputDistribution lift_policy(const TeamPolicy& policy, const StrategySpace& a,
                                     const StrategySpace& b) {
  auto lift_side = [](const Conditional& cond, const StrategySpace& sp) {
    if (static_cast<int>(cond.size()) != sp.obs_size)
      throw ValidationError("lift_policy: policy has " + std::to_string(cond.size()) +
                            " conditionals, strategy space expects " +
                            std::to_string(sp.obs_size));
    for (const auto& row : cond)
      if (static_cast<int>(row.size()) != sp.input_size)
        throw ValidationError("lift_policy: conditional width mismatch");
    std::vector<double> mu(static_cast<std::size_t>(sp.size()));
    for (int u = 0; u < sp.size(); ++u) {
      const std::vector<int> map = sp.map_of(u);
      double prob = 1.0;
      for (int v = 0; v < sp.obs_size; ++v)
        prob *= cond[static_cast<std::size_t>(v)]
                    [static_cast<std::size_t>(map[static_cast<std::size_t>(v)])];
      mu[static_cast<std::size_t>(u)] = prob;
    }
    return mu;
  };
  return {lift_side(policy.pi_a, a), lift_side(policy.pi_b, b)};
}

Tensor equivalent_joint(const EquivalentMac& mac, const ProductInputDistribution& mu) {
  const int ua = mac.space_a.size();
  const int ub = mac.space_b.size();
  if (static_cast<int>(mu.mu_a.size()) != ua || static_cast<int>(mu.mu_b.size()) != ub)
    throw ValidationError("equivalent_joint: input distribution size mismatch");
  auto check_norm = [](const std::vector<double>& p, const char* name) {
    double sum = 0.0;
    for (double v : p) {
      if (v < 0.0)
        throw ValidationError(std::string("equivalent_joint: negative mass in ") + name);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kDerivedTol)
      throw ValidationError(std::string("equivalent_joint: ") + name + " sums to " +
                            std::to_string(sum));
  };
  check_norm(mu.mu_a, "mu_a");
  check_norm(mu.mu_b, "mu_b");

  Tensor joint({ua, ub, mac.z_size()});
  std::size_t flat = 0;
  const double* q = mac.q.data();
  for (int ia = 0; ia < ua; ++ia) {
    for (int ib = 0; ib < ub; ++ib) {
      const double m = mu.mu_a[static_cast<std::size_t>(ia)] *
                       mu.mu_b[static_cast<std::size_t>(ib)];
      for (int z = 0; z < mac.z_size(); ++z, ++flat) joint[flat] = m * q[flat];
    }
  }
  return joint;
}

double MiEqualityReport::max_deviation() const {
  return std::max({deviation[0], deviation[1], deviation[2]});
}

MiEqualityReport check_mi_equalities(const MacModel& model, const TeamPolicy& policy) {
  ensure_valid_model(model);
  const JointDistribution joint = build_joint(model, policy);

  MiEqualityReport rep;
  rep.policy_side[0] = cond_mutual_info(joint, {Var::Xa}, {Var::Y}, {Var::Xb, Var::S});
  rep.policy_side[1] = cond_mutual_info(joint, {Var::Xb}, {Var::Y}, {Var::Xa, Var::S});
  rep.policy_side[2] = cond_mutual_info(joint, {Var::Xa, Var::Xb}, {Var::Y}, {Var::S});

  const EquivalentMac mac = build_equivalent_mac(model);
  const ProductInputDistribution mu = lift_policy(policy, mac.space_a, mac.space_b);
  const Tensor ej = equivalent_joint(mac, mu);
  static constexpr int kUa[] = {0}, kUb[] = {1}, kZ[] = {2}, kBoth[] = {0, 1};
  rep.strategy_side[0] = conditional_mutual_information(ej, kUa, kZ, kUb);
  rep.strategy_side[1] = conditional_mutual_information(ej, kUb, kZ, kUa);
  rep.strategy_side[2] = conditional_mutual_information(ej, kBoth, kZ, {});

  for (int i = 0; i < 3; ++i)
    rep.deviation[static_cast<std::size_t>(i)] =
        std::abs(rep.policy_side[static_cast<std::size_t>(i)] -
                 rep.strategy_side[static_cast<std::size_t>(i)]);
  return rep;
}

}  // namespace macsi
