#ifndef QLS_GEOMETRY_HPP
#define QLS_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace qls {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<PlanePoint> points;
  bool closed = false;
};

/// Distance queries against a fixed polyline. Uses a nearest-vertex scan
/// followed by refinement over the adjacent segments, which is exact for
/// the smooth convex contours this project produces.
class PolylineDistance {
 public:
  explicit PolylineDistance(Polyline line);

  const Polyline& line() const noexcept { return line_; }

  /// Unsigned distance from q to the polyline.
  double distance(PlanePoint q) const;

  /// Even-odd crossing test; only meaningful for closed polylines.
  bool inside(PlanePoint q) const;

  /// distance(q) with negative sign inside (closed polylines only;
  /// open polylines always report the unsigned distance).
  double signed_distance(PlanePoint q) const;

 private:
  Polyline line_;
};

/// Circle as a closed polyline with `segments` uniform samples.
Polyline circle_polyline(PlanePoint center, double radius,
                         std::size_t segments = 4096);

/// Symmetric Hausdorff distance between two polylines, evaluated from the
/// vertices of each against the segments of the other.
double hausdorff_distance(const Polyline& a, const Polyline& b);

}  // namespace qls

#endif
