#include "qls/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qls/errors.hpp"

namespace qls {

namespace {

double segment_distance(PlanePoint q, PlanePoint a, PlanePoint b) {
  const double ex = b.x - a.x;
  const double ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((q.x - a.x) * ex + (q.y - a.y) * ey) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = q.x - (a.x + t * ex);
  const double dy = q.y - (a.y + t * ey);
  return std::hypot(dx, dy);
}

}  // namespace

PolylineDistance::PolylineDistance(Polyline line) : line_(std::move(line)) {
  if (line_.points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "polyline needs at least two vertices");
  }
}

double PolylineDistance::distance(PlanePoint q) const {
  const auto& pts = line_.points;
  const std::size_t n = pts.size();

  // Nearest vertex first (squared distances, no sqrt in the scan).
  std::size_t best = 0;
  double best2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = q.x - pts[i].x;
    const double dy = q.y - pts[i].y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best2) {
      best2 = d2;
      best = i;
    }
  }

  // Refine over segments adjacent to the nearest vertex.
  const std::size_t seg_count = line_.closed ? n : n - 1;
  double d = std::sqrt(best2);
  for (std::ptrdiff_t off = -2; off <= 1; ++off) {
    std::ptrdiff_t s = static_cast<std::ptrdiff_t>(best) + off;
    if (line_.closed) {
      s = ((s % static_cast<std::ptrdiff_t>(seg_count)) +
           static_cast<std::ptrdiff_t>(seg_count)) %
          static_cast<std::ptrdiff_t>(seg_count);
    } else if (s < 0 || s >= static_cast<std::ptrdiff_t>(seg_count)) {
      continue;
    }
    const std::size_t i = static_cast<std::size_t>(s);
    const std::size_t j = (i + 1) % n;
    d = std::min(d, segment_distance(q, pts[i], pts[j]));
  }
  return d;
}

bool PolylineDistance::inside(PlanePoint q) const {
  const auto& pts = line_.points;
  const std::size_t n = pts.size();
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const bool crosses = (pts[i].y > q.y) != (pts[j].y > q.y);
    if (crosses) {
      const double xi = pts[j].x + (pts[i].x - pts[j].x) * (q.y - pts[j].y) /
                                       (pts[i].y - pts[j].y);
      if (q.x < xi) in = !in;
    }
  }
  return in;
}

double PolylineDistance::signed_distance(PlanePoint q) const {
  const double d = distance(q);
  if (line_.closed && inside(q)) return -d;
  return d;
}

Polyline circle_polyline(PlanePoint center, double radius,
                         std::size_t segments) {
  if (!(radius > 0.0) || segments < 3) {
    throw Error(ErrorCode::InvalidArgument, "invalid circle polyline request");
  }
  Polyline line;
  line.closed = true;
  line.points.reserve(segments);
  for (std::size_t k = 0; k < segments; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) /
                     static_cast<double>(segments);
    line.points.push_back(
        {center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return line;
}

double hausdorff_distance(const Polyline& a, const Polyline& b) {
  const PolylineDistance da(a);
  const PolylineDistance db(b);
  double worst = 0.0;
  for (const auto& p : a.points) worst = std::max(worst, db.distance(p));
  for (const auto& p : b.points) worst = std::max(worst, da.distance(p));
  return worst;
}

}  // namespace qls
