#pragma once

#include <span>
#include <vector>

#include "macsi/model.hpp"

namespace macsi {

struct RatePair {
  double ra = 0.0;  // bits per use
  double rb = 0.0;

  bool operator==(const RatePair&) const = default;
};

// One policy's rate region, stored by its three bounds:
//   0 <= R_a <= i_a, 0 <= R_b <= i_b, R_a + R_b <= i_sum.
// Construction enforces max(i_a, i_b) <= i_sum <= i_a + i_b within 1e-9 and
// clamps fp slack so the inequalities hold exactly afterwards.
class Pentagon {
 public:
  Pentagon(double ia, double ib, double isum);

  double i_a() const { return i_a_; }
  double i_b() const { return i_b_; }
  double i_sum() const { return i_sum_; }

  // Corner chain of the down-closed region, counterclockwise starting at the
  // origin. Duplicates collapse, so degenerate pentagons yield 1-4 corners.
  std::vector<RatePair> corners() const;

 private:
  double i_a_, i_b_, i_sum_;
};

// Convex, down-closed region in the nonnegative quadrant. Vertices run
// counterclockwise starting at the origin; the chain is minimal (no collinear
// triples beyond 1e-12 cross product).
class Polygon {
 public:
  Polygon() = default;  // empty; fill via from_points

  // Convex hull of the given points. Requires the origin among the inputs
  // (every pentagon corner set contains it).
  static Polygon from_points(std::vector<RatePair> points);

  const std::vector<RatePair>& vertices() const { return vertices_; }

 private:
  void validate() const;

  std::vector<RatePair> vertices_;
};

// Raw monotone-chain hull (counterclockwise, starting at the lexicographic
// minimum); collinear points within 1e-12 cross are dropped.
std::vector<RatePair> convex_hull(std::vector<RatePair> points);

// i_a = I(X_a;Y|X_b,S), i_b = I(X_b;Y|X_a,S), i_sum = I(X_a,X_b;Y|S) on the
// joint induced by the policy.
Pentagon pentagon_of_policy(const MacModel& model, const TeamPolicy& policy);

// Convex hull of the union of the down-closed pentagons (time-sharing closure).
Polygon hull_union(std::span<const Pentagon> pentagons);

// True iff the point lies in the region or within Euclidean distance tol of it.
bool contains(const Polygon& region, RatePair point, double tol);

struct SupportResult {
  double value = 0.0;  // bits
  RatePair argmax;
};

// max over pentagons and their corners of la*ra + lb*rb. Ties resolve toward
// the corner maximizing ra when la >= lb, symmetrically otherwise.
SupportResult support(std::span<const Pentagon> pentagons, double la, double lb);

// Support of a polygon: max of la*ra + lb*rb over its vertices.
SupportResult polygon_support(const Polygon& region, double la, double lb);

}  // namespace macsi
