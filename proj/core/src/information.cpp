#include "macsi/information.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "macsi/errors.hpp"

namespace macsi {

double entropy(std::span<const double> p) {
  double sum = 0.0;
  double bits = 0.0;
  for (double v : p) {
    if (v < -1e-12)
      throw ValidationError("entropy: negative probability " + std::to_string(v));
    sum += v;
    if (v > 0.0) bits -= v * std::log2(v);
  }
  if (std::abs(sum - 1.0) > kDerivedTol)
    throw ValidationError("entropy: probabilities sum to " + std::to_string(sum));
  return bits < 0.0 ? 0.0 : bits;
}

double binary_entropy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw ValidationError("binary_entropy: argument " + std::to_string(eps) +
                          " outside [0,1]");
  if (eps == 0.0 || eps == 1.0) return 0.0;
  return -eps * std::log2(eps) - (1.0 - eps) * std::log2(1.0 - eps);
}

double eta(double eps, int y_size) {
  if (y_size < 1) throw ValidationError("eta: output alphabet size must be positive");
  if (!(eps >= 0.0 && eps < 1.0))
    throw ValidationError("eta: argument " + std::to_string(eps) +
                          " outside [0,1) (pole at 1)");
  if (eps == 0.0) return 0.0;
  const double denom = 1.0 - eps;
  return eps / denom * std::log2(static_cast<double>(y_size)) +
         binary_entropy(eps) / denom;
}

namespace {

// Mixed-radix packing of the coordinates selected by `axes`.
int pack(std::span<const int> idx, std::span<const int> axes, const Tensor& t) {
  int v = 0;
  for (int a : axes) v = v * t.dim(a) + idx[static_cast<std::size_t>(a)];
  return v;
}

int group_size(std::span<const int> axes, const Tensor& t) {
  int n = 1;
  for (int a : axes) n *= t.dim(a);
  return n;
}

}  // namespace

double conditional_mutual_information(const Tensor& joint, std::span<const int> left,
                                      std::span<const int> right,
                                      std::span<const int> given) {
  std::vector<bool> seen(static_cast<std::size_t>(joint.rank()), false);
  auto mark = [&](std::span<const int> axes, const char* name) {
    for (int a : axes) {
      if (a < 0 || a >= joint.rank())
        throw ValidationError(std::string("cond_mutual_info: axis out of range in ") +
                              name);
      if (seen[static_cast<std::size_t>(a)])
        throw ValidationError("cond_mutual_info: variable subsets overlap");
      seen[static_cast<std::size_t>(a)] = true;
    }
  };
  mark(left, "left");
  mark(right, "right");
  mark(given, "given");

  const int nl = group_size(left, joint);
  const int nr = group_size(right, joint);
  const int ng = group_size(given, joint);

  std::vector<double> plrg(static_cast<std::size_t>(nl) * nr * ng, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(joint.rank()));
  double total = 0.0;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const double v = joint[flat];
    if (v == 0.0) continue;
    if (v < 0.0)
      throw ValidationError("cond_mutual_info: joint tensor has negative entries");
    total += v;
    joint.unravel(flat, idx);
    const int il = pack(idx, left, joint);
    const int ir = pack(idx, right, joint);
    const int ig = pack(idx, given, joint);
    plrg[(static_cast<std::size_t>(ig) * nl + il) * nr + ir] += v;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw ValidationError("cond_mutual_info: joint tensor sums to " +
                          std::to_string(total));

  std::vector<double> plg(static_cast<std::size_t>(ng) * nl, 0.0);
  std::vector<double> prg(static_cast<std::size_t>(ng) * nr, 0.0);
  std::vector<double> pg(static_cast<std::size_t>(ng), 0.0);
  for (int g = 0; g < ng; ++g) {
    for (int l = 0; l < nl; ++l) {
      for (int r = 0; r < nr; ++r) {
        const double v = plrg[(static_cast<std::size_t>(g) * nl + l) * nr + r];
        plg[static_cast<std::size_t>(g) * nl + l] += v;
        prg[static_cast<std::size_t>(g) * nr + r] += v;
        pg[static_cast<std::size_t>(g)] += v;
      }
    }
  }

  double bits = 0.0;
  for (int g = 0; g < ng; ++g) {
    if (pg[static_cast<std::size_t>(g)] <= 0.0) continue;  // null conditioning atom
    for (int l = 0; l < nl; ++l) {
      for (int r = 0; r < nr; ++r) {
        const double p = plrg[(static_cast<std::size_t>(g) * nl + l) * nr + r];
        if (p <= 0.0) continue;
        bits += p * std::log2(p * pg[static_cast<std::size_t>(g)] /
                              (plg[static_cast<std::size_t>(g) * nl + l] *
                               prg[static_cast<std::size_t>(g) * nr + r]));
      }
    }
  }
  if (std::abs(bits) < kMiClampTol) bits = 0.0;
  return bits;
}

double cond_mutual_info(const JointDistribution& joint, VarSet left, VarSet right,
                        VarSet given) {
  if (left.intersects(right) || left.intersects(given) || right.intersects(given))
    throw ValidationError("cond_mutual_info: variable subsets overlap");
  const std::vector<int> l = left.axes();
  const std::vector<int> r = right.axes();
  const std::vector<int> g = given.axes();
  return conditional_mutual_information(joint.t, l, r, g);
}

}  // namespace macsi
