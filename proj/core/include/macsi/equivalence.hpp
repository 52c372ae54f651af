#pragma once

#include <array>
#include <span>
#include <vector>

#include "macsi/model.hpp"
#include "macsi/tensor.hpp"

namespace macsi {

// Strategy spaces above this size per encoder are rejected; the transform is a
// verification device, not the main compute path.
inline constexpr int kStrategySpaceCap = 4096;

// The finite set of maps u: V -> X for one encoder, indexed lexicographically
// by the value tuple (u(0), u(1), ...), u(0) most significant.
struct StrategySpace {
  int obs_size = 0;
  int input_size = 0;

  int size() const;
  std::vector<int> map_of(int index) const;        // index -> full map
  int index_of(std::span<const int> map) const;    // inverse
  int apply(int index, int v) const;               // u_index(v)
};

// Ordinary MAC over strategy functions: inputs (u_a, u_b), output z = (s, y),
// kernel Q(z | u_a, u_b) = P(s) P(y | s, u_a(q_a(s)), u_b(q_b(s))).
struct EquivalentMac {
  StrategySpace space_a;
  StrategySpace space_b;
  int state_size = 0;
  int output_size = 0;
  Tensor q;  // dims (|U_a|, |U_b|, |S|*|Y|), z = s*|Y| + y

  int z_size() const { return state_size * output_size; }
};

struct ProductInputDistribution {
  std::vector<double> mu_a;
  std::vector<double> mu_b;
};

EquivalentMac build_equivalent_mac(const MacModel& model);

// mu_i(u) = prod_v pi_i(u(v) | v): the product lift of a team policy.
ProductInputDistribution lift_policy(const TeamPolicy& policy, const StrategySpace& a,
                                     const StrategySpace& b);

// P(u_a, u_b, z) = mu_a(u_a) mu_b(u_b) Q(z|u_a,u_b), dims (|U_a|, |U_b|, |Z|).
Tensor equivalent_joint(const EquivalentMac& mac, const ProductInputDistribution& mu);

// The three identities tying the policy-side joint to the strategy-side joint:
//   I(X_a;Y|X_b,S) = I(U_a;Z|U_b),  I(X_b;Y|X_a,S) = I(U_b;Z|U_a),
//   I(X_a,X_b;Y|S) = I(U_a,U_b;Z).
struct MiEqualityReport {
  std::array<double, 3> policy_side{};    // computed on build_joint
  std::array<double, 3> strategy_side{};  // computed on equivalent_joint
  std::array<double, 3> deviation{};      // absolute differences, bits

  double max_deviation() const;
};

MiEqualityReport check_mi_equalities(const MacModel& model, const TeamPolicy& policy);

}  // namespace macsi
