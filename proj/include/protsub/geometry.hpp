#ifndef PROTSUB_GEOMETRY_HPP
#define PROTSUB_GEOMETRY_HPP

// Convex polygons in the complex plane, including the degenerate segment and
// point cases. Vertices are kept counterclockwise without repeats.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace protsub::geom {

using Point = std::complex<double>;
using Polygon = std::vector<Point>;

inline constexpr double kGeomTol = 1e-12;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dotp(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Collapse points closer than `tol` (first occurrence wins).
inline Polygon unique_points(const Polygon& pts, double tol = kGeomTol) {
  Polygon out;
  for (const auto& p : pts) {
    if (std::none_of(out.begin(), out.end(), [&](Point q) { return std::abs(p - q) <= tol; })) {
      out.push_back(p);
    }
  }
  return out;
}

/// Andrew's monotone chain; points within `tol` of a hull edge are dropped.
inline Polygon convex_hull(const Polygon& input, double tol = kGeomTol) {
  Polygon pts = unique_points(input, tol);
  if (pts.size() <= 1) return pts;
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  auto turn_ok = [&](const Polygon& h, Point p) {
    const Point o = h[h.size() - 2];
    const Point a = h.back();
    return cross(a - o, p - o) > tol * std::abs(p - o);
  };
  Polygon lower, upper;
  for (const auto& p : pts) {
    while (lower.size() >= 2 && !turn_ok(lower, p)) lower.pop_back();
    lower.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (upper.size() >= 2 && !turn_ok(upper, *it)) upper.pop_back();
    upper.push_back(*it);
  }
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return unique_points(lower, tol);
}

/// Keeps the part of `poly` on the left of the directed line through `a`
/// with unit direction `dir` (boundary band of width `tol` counts as inside).
inline Polygon clip_halfplane(const Polygon& poly, Point a, Point dir, double tol = kGeomTol) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point cur = poly[i];
    const Point nxt = poly[(i + 1) % n];
    const double dc = cross(dir, cur - a);
    const double dn = cross(dir, nxt - a);
    if (dc >= -tol) out.push_back(cur);
    if ((dc > tol && dn < -tol) || (dc < -tol && dn > tol)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return unique_points(out, tol);
}

inline double distance_to_segment(Point z, Point a, Point b) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(dotp(z - a, d) / len2, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

inline bool contains(const Polygon& poly, Point z, double tol = kGeomTol) {
  if (poly.empty()) return false;
  if (poly.size() == 1) return std::abs(z - poly[0]) <= tol;
  if (poly.size() == 2) return distance_to_segment(z, poly[0], poly[1]) <= tol;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % poly.size()];
    if (cross((b - a) / std::abs(b - a), z - a) < -tol) return false;
  }
  return true;
}

/// Intersection of two convex polygons (either may be degenerate).
inline Polygon intersect(const Polygon& p, const Polygon& q, double tol = kGeomTol) {
  if (p.empty() || q.empty()) return {};
  if (q.size() == 1) return contains(p, q[0], tol) ? q : Polygon{};
  if (p.size() == 1) return contains(q, p[0], tol) ? p : Polygon{};
  Polygon out = p;
  if (q.size() == 2) {
    const Point a = q[0];
    const Point b = q[1];
    const Point d = (b - a) / std::abs(b - a);
    const Point i{0.0, 1.0};
    out = clip_halfplane(out, a, d, tol);
    out = clip_halfplane(out, b, -d, tol);
    out = clip_halfplane(out, a, -i * d, tol);
    out = clip_halfplane(out, b, i * d, tol);
  } else {
    for (std::size_t k = 0; k < q.size() && !out.empty(); ++k) {
      const Point a = q[k];
      const Point b = q[(k + 1) % q.size()];
      out = clip_halfplane(out, a, (b - a) / std::abs(b - a), tol);
    }
  }
  // A sliver thinner than the tolerance band is a segment or a point.
  return convex_hull(out, 10.0 * tol);
}

/// Every vertex of `inner` lies in `outer`.
inline bool polygon_within(const Polygon& inner, const Polygon& outer, double tol = 1e-9) {
  return std::all_of(inner.begin(), inner.end(), [&](Point z) { return contains(outer, z, tol); });
}

}  // namespace protsub::geom

#endif  // PROTSUB_GEOMETRY_HPP
