#pragma once

#include <span>

#include "macsi/model.hpp"
#include "macsi/tensor.hpp"

namespace macsi {

// Everything here is in bits (log base 2); rates downstream are bits per
// channel use. Mutual-information values within this distance of zero snap to
// exactly 0 so that degenerate pentagon edges stay well formed.
inline constexpr double kMiClampTol = 1e-10;

// -sum p log2 p with the 0 log 0 = 0 convention. Rejects entries below
// -1e-12 and vectors whose sum is off 1 by more than kDerivedTol.
double entropy(std::span<const double> p);

// H(eps) = -eps log2 eps - (1-eps) log2(1-eps) on [0,1], endpoints exactly 0.
double binary_entropy(double eps);

// Converse slack eta(eps) = eps/(1-eps) log2|Y| + H(eps)/(1-eps), eps in [0,1).
double eta(double eps, int y_size);

// I(left; right | given) on an arbitrary joint probability tensor. The three
// axis lists must be pairwise disjoint; axes absent from all lists are
// marginalized out. Conditioning atoms of zero probability contribute 0.
double conditional_mutual_information(const Tensor& joint,
                                      std::span<const int> left,
                                      std::span<const int> right,
                                      std::span<const int> given);

// Same on the named (S, X_a, X_b, Y) joint.
double cond_mutual_info(const JointDistribution& joint, VarSet left, VarSet right,
                        VarSet given);

}  // namespace macsi
