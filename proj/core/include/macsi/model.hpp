#pragma once

#include <bit>
#include <initializer_list>
#include <string>
#include <vector>

#include "macsi/tensor.hpp"

namespace macsi {

// Normalization tolerance on declared inputs (priors, kernel rows, policy rows).
inline constexpr double kInputTol = 1e-12;
// Normalization tolerance on derived tensors (joints, marginals).
inline constexpr double kDerivedTol = 1e-10;

// Random variables of the single-letter joint (S, X_a, X_b, Y), in tensor axis order.
enum class Var : int { S = 0, Xa = 1, Xb = 2, Y = 3 };

// Small set of Var, bitmask-backed.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vars) {
    for (Var v : vars) mask_ |= bit(v);
  }

  constexpr bool contains(Var v) const { return (mask_ & bit(v)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int count() const { return std::popcount(mask_); }
  constexpr bool intersects(VarSet o) const { return (mask_ & o.mask_) != 0; }
  constexpr VarSet operator|(VarSet o) const {
    VarSet r;
    r.mask_ = mask_ | o.mask_;
    return r;
  }
  constexpr bool operator==(const VarSet&) const = default;

  // Axis indices in ascending (canonical) order.
  std::vector<int> axes() const;

 private:
  static constexpr unsigned bit(Var v) { return 1u << static_cast<int>(v); }
  unsigned mask_ = 0;
};

// Which of the two encoders, for per-encoder operations.
enum class Side { A, B };

// Finite-state MAC with two transmitters, i.i.d. state with prior P(s),
// per-encoder quantized state observations v_i = q_i(s), and channel kernel
// P(y | s, x_a, x_b). All alphabets are dense integer index ranges; the
// optional label vectors exist for I/O only.
struct MacModel {
  std::vector<double> state_prior;
  int input_size_a = 0;
  int input_size_b = 0;
  int output_size = 0;
  std::vector<int> quantizer_a;  // state index -> dense observation index
  std::vector<int> quantizer_b;
  int obs_size_a = 0;  // |V_a|
  int obs_size_b = 0;  // |V_b|
  Tensor kernel;       // dims (|S|, |X_a|, |X_b|, |Y|)

  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels_a;
  std::vector<std::string> input_labels_b;
  std::vector<std::string> output_labels;

  int state_size() const { return static_cast<int>(state_prior.size()); }
  int input_size(Side s) const { return s == Side::A ? input_size_a : input_size_b; }
  int obs_size(Side s) const { return s == Side::A ? obs_size_a : obs_size_b; }
  const std::vector<int>& quantizer(Side s) const {
    return s == Side::A ? quantizer_a : quantizer_b;
  }
};

// One conditional distribution per observation symbol: cond[v][x].
using Conditional = std::vector<std::vector<double>>;

// Memoryless stationary team policy: per-encoder input distributions
// conditioned on the local quantized observation.
struct TeamPolicy {
  Conditional pi_a;
  Conditional pi_b;

  const Conditional& side(Side s) const { return s == Side::A ? pi_a : pi_b; }
  Conditional& side(Side s) { return s == Side::A ? pi_a : pi_b; }
};

// Probability tensor over (S, X_a, X_b, Y).
struct JointDistribution {
  Tensor t;

  int dim(Var v) const { return t.dim(static_cast<int>(v)); }
  double at(int s, int xa, int xb, int y) const {
    const int idx[4] = {s, xa, xb, y};
    return t.at(std::span<const int>(idx, 4));
  }
};

struct Violation {
  std::string location;  // e.g. "kernel(s=0,xa=1,xb=0)"
  double magnitude;      // the offending value (row sum, negative entry, ...)
  std::string message;   // human-readable, includes the magnitude
};
using ValidationReport = std::vector<Violation>;

// Report-style validation: collects every invariant violation, never throws.
// An empty report means the model is valid.
ValidationReport validate_model(const MacModel& model);

// Throws ValidationError listing the violations when the model is invalid.
void ensure_valid_model(const MacModel& model);

// Checks policy shape against the model and per-row normalization (kInputTol).
void ensure_valid_policy(const MacModel& model, const TeamPolicy& policy);

// The single-letter joint nu(s, x_a, x_b, y) =
// P(s) pi_a(x_a|q_a(s)) pi_b(x_b|q_b(s)) P(y|s,x_a,x_b).
JointDistribution build_joint(const MacModel& model, const TeamPolicy& policy);

// Sums out all axes not in `keep`; result axes follow the canonical Var order.
Tensor marginal(const JointDistribution& joint, VarSet keep);

TeamPolicy uniform_policy(const MacModel& model);

}  // namespace macsi
