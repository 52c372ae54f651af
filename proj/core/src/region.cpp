#include "macsi/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "macsi/errors.hpp"
#include "macsi/information.hpp"

namespace macsi {

namespace {

constexpr double kBoundTol = 1e-9;      // slack allowed on pentagon inequalities
constexpr double kCollinearTol = 1e-12; // cross-product area treated as collinear

double cross(RatePair o, RatePair a, RatePair b) {
  return (a.ra - o.ra) * (b.rb - o.rb) - (a.rb - o.rb) * (b.ra - o.ra);
}

double dist(RatePair p, RatePair q) { return std::hypot(p.ra - q.ra, p.rb - q.rb); }

double segment_distance(RatePair p, RatePair a, RatePair b) {
  const double dx = b.ra - a.ra, dy = b.rb - a.rb;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return dist(p, a);
  double t = ((p.ra - a.ra) * dx + (p.rb - a.rb) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, {a.ra + t * dx, a.rb + t * dy});
}

}  // namespace

Pentagon::Pentagon(double ia, double ib, double isum) {
  if (!std::isfinite(ia) || !std::isfinite(ib) || !std::isfinite(isum))
    throw ValidationError("pentagon: bounds must be finite");
  if (ia < -kBoundTol || ib < -kBoundTol)
    throw ValidationError("pentagon: negative single-rate bound");
  i_a_ = std::max(ia, 0.0);
  i_b_ = std::max(ib, 0.0);
  const double lo = std::max(i_a_, i_b_);
  const double hi = i_a_ + i_b_;
  if (isum < lo - kBoundTol || isum > hi + kBoundTol)
    throw ValidationError("pentagon: sum bound " + std::to_string(isum) +
                          " outside [max(i_a,i_b), i_a+i_b] = [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
  i_sum_ = std::clamp(isum, lo, hi);
}

std::vector<RatePair> Pentagon::corners() const {
  std::vector<RatePair> c;
  auto push = [&](double x, double y) {
    x = std::max(x, 0.0);
    y = std::max(y, 0.0);
    for (const RatePair& p : c)
      if (p.ra == x && p.rb == y) return;
    c.push_back({x, y});
  };
  push(0.0, 0.0);
  push(i_a_, 0.0);
  if (i_a_ + i_b_ > i_sum_) {
    push(i_a_, std::min(i_sum_ - i_a_, i_b_));
    push(std::min(i_sum_ - i_b_, i_a_), i_b_);
  } else {
    push(i_a_, i_b_);
  }
  push(0.0, i_b_);
  return c;
}

std::vector<RatePair> convex_hull(std::vector<RatePair> pts) {
  std::sort(pts.begin(), pts.end(), [](RatePair a, RatePair b) {
    return a.ra < b.ra || (a.ra == b.ra && a.rb < b.rb);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<RatePair> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return hull;
}

Polygon Polygon::from_points(std::vector<RatePair> points) {
  if (points.empty()) throw ValidationError("polygon: no points");
  for (const RatePair& p : points)
    if (!std::isfinite(p.ra) || !std::isfinite(p.rb))
      throw ValidationError("polygon: non-finite point");
  Polygon poly;
  poly.vertices_ = convex_hull(std::move(points));
  poly.validate();
  return poly;
}

void Polygon::validate() const {
  const auto& v = vertices_;
  if (v.empty()) throw ValidationError("polygon: empty");
  // Our regions are down-closed in the nonnegative quadrant, so the
  // lexicographic minimum (= first hull vertex) must be the origin.
  if (std::abs(v[0].ra) > kBoundTol || std::abs(v[0].rb) > kBoundTol)
    throw ValidationError("polygon: missing origin vertex");
  for (const RatePair& p : v)
    if (p.ra < -kBoundTol || p.rb < -kBoundTol)
      throw ValidationError("polygon: vertex outside the nonnegative quadrant");
  if (v.size() == 2) {
    // Degenerate segment: down-closedness forces it onto an axis.
    if (std::min(v[1].ra, v[1].rb) > kBoundTol)
      throw ValidationError("polygon: degenerate segment off the axes");
    return;
  }
  if (v.size() < 3) return;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RatePair a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    if (cross(a, b, c) < -kCollinearTol)
      throw ValidationError("polygon: vertex chain is not convex counterclockwise");
  }
  // Down-closedness: every edge is an axis edge or has its outward normal in
  // the closed positive quadrant.
  for (std::size_t i = 0; i < n; ++i) {
    const RatePair a = v[i], b = v[(i + 1) % n];
    const double dx = b.ra - a.ra, dy = b.rb - a.rb;
    const bool upper = dy >= -kBoundTol && dx <= kBoundTol;  // normal (dy, -dx) >= 0
    const bool bottom = std::abs(dy) <= kBoundTol && a.rb <= kBoundTol &&
                        b.rb <= kBoundTol && dx > 0.0;
    const bool closing = std::abs(dx) <= kBoundTol && a.ra <= kBoundTol &&
                         b.ra <= kBoundTol && dy < 0.0;
    if (!upper && !bottom && !closing)
      throw ValidationError("polygon: region is not down-closed");
  }
}

Pentagon pentagon_of_policy(const MacModel& model, const TeamPolicy& policy) {
  ensure_valid_model(model);
  const JointDistribution joint = build_joint(model, policy);
  const double ia = cond_mutual_info(joint, {Var::Xa}, {Var::Y}, {Var::Xb, Var::S});
  const double ib = cond_mutual_info(joint, {Var::Xb}, {Var::Y}, {Var::Xa, Var::S});
  const double isum = cond_mutual_info(joint, {Var::Xa, Var::Xb}, {Var::Y}, {Var::S});
  return Pentagon(ia, ib, isum);
}

Polygon hull_union(std::span<const Pentagon> pentagons) {
  if (pentagons.empty()) throw ValidationError("hull_union: empty pentagon list");
  std::vector<RatePair> points;
  points.reserve(pentagons.size() * 5);
  for (const Pentagon& p : pentagons) {
    for (const RatePair& c : p.corners()) points.push_back(c);
  }
  return Polygon::from_points(std::move(points));
}

bool contains(const Polygon& region, RatePair point, double tol) {
  if (tol < 0.0) throw ValidationError("contains: negative tolerance");
  if (!std::isfinite(point.ra) || !std::isfinite(point.rb))
    throw ValidationError("contains: non-finite point");
  const auto& v = region.vertices();
  if (v.size() == 1) return dist(point, v[0]) <= tol;
  if (v.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < v.size() && inside; ++i)
      inside = cross(v[i], v[(i + 1) % v.size()], point) >= 0.0;
    if (inside) return true;
  }
  double best = dist(point, v[0]);
  for (std::size_t i = 0; i < v.size(); ++i)
    best = std::min(best, segment_distance(point, v[i], v[(i + 1) % v.size()]));
  return best <= tol;
}

namespace {

// Tie rule: la >= lb prefers the corner maximizing ra, otherwise rb.
bool tie_better(RatePair cand, RatePair best, bool prefer_a) {
  if (prefer_a)
    return cand.ra > best.ra || (cand.ra == best.ra && cand.rb > best.rb);
  return cand.rb > best.rb || (cand.rb == best.rb && cand.ra > best.ra);
}

SupportResult support_over_points(std::span<const RatePair> points, double la,
                                  double lb) {
  const bool prefer_a = la >= lb;
  SupportResult res;
  res.value = -1.0;
  bool first = true;
  for (const RatePair& c : points) {
    const double v = la * c.ra + lb * c.rb;
    if (first || v > res.value || (v == res.value && tie_better(c, res.argmax, prefer_a))) {
      res.value = v;
      res.argmax = c;
      first = false;
    }
  }
  return res;
}

void check_weights(double la, double lb) {
  if (!(la >= 0.0) || !(lb >= 0.0))
    throw ValidationError("support: weights must be nonnegative");
  if (la == 0.0 && lb == 0.0)
    throw ValidationError("support: weights must not both be zero");
}

}  // namespace

SupportResult support(std::span<const Pentagon> pentagons, double la, double lb) {
  check_weights(la, lb);
  if (pentagons.empty()) throw ValidationError("support: empty pentagon list");
  std::vector<RatePair> points;
  points.reserve(pentagons.size() * 5);
  for (const Pentagon& p : pentagons)
    for (const RatePair& c : p.corners()) points.push_back(c);
  return support_over_points(points, la, lb);
}

SupportResult polygon_support(const Polygon& region, double la, double lb) {
  check_weights(la, lb);
  return support_over_points(region.vertices(), la, lb);
}

}  // namespace macsi
