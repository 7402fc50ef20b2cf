#include "qls/contour_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "marching_squares.hpp"

namespace qls {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::string format_point(double x, double y) {
  std::ostringstream os;
  os << "(" << x << ", " << y << ")";
  return os.str();
}

}  // namespace

ContourPoint::ContourPoint(double a1, double a2) : a1_(a1), a2_(a2) {
  const double rsq = a1 * a1 + a2 * a2;
  if (!(rsq <= 1.0 + kChartTol)) {
    throw ChartExitError(std::atan2(a2, a1),
                         "plane point " + format_point(a1, a2) +
                             " lies outside the unit-sphere chart");
  }
  a3_ = std::sqrt(std::max(0.0, 1.0 - rsq));
}

ConicLevelSet::ConicLevelSet(double q11, double q12, double q22)
    : q11_(q11), q12_(q12), q22_(q22) {
  if (!std::isfinite(q11_) || !std::isfinite(q12_) || !std::isfinite(q22_)) {
    throw Error(ErrorCode::InvalidArgument,
                "conic coefficients must be finite");
  }
  if (q11_ == 0.0 && q12_ == 0.0 && q22_ == 0.0) {
    throw Error(ErrorCode::DegenerateContour,
                "all-zero quadratic form has no level-1 contour");
  }
}

ConicLevelSet ConicLevelSet::from_quad(double q11, double q12, double q22) {
  return ConicLevelSet(q11, q12, q22);
}

bool ConicLevelSet::is_diagonal(double tol) const {
  return std::abs(q12_) <= tol;
}

bool ConicLevelSet::is_ellipse() const {
  return q11_ > 0.0 && q11_ * q22_ - q12_ * q12_ > 0.0;
}

void ConicLevelSet::principal_axes(double& semi_a, double& semi_b,
                                   double& angle) const {
  if (!is_ellipse()) {
    throw Error(ErrorCode::DegenerateContour,
                "conic is not an ellipse; no principal axes");
  }
  if (is_diagonal()) {
    semi_a = 1.0 / std::sqrt(q11_);
    semi_b = 1.0 / std::sqrt(q22_);
    angle = 0.0;
    return;
  }
  const double ang = 0.5 * std::atan2(2.0 * q12_, q11_ - q22_);
  const double c = std::cos(ang);
  const double s = std::sin(ang);
  const double la = q11_ * c * c + 2.0 * q12_ * s * c + q22_ * s * s;
  const double lb = q11_ * s * s - 2.0 * q12_ * s * c + q22_ * c * c;
  semi_a = 1.0 / std::sqrt(la);
  semi_b = 1.0 / std::sqrt(lb);
  angle = ang;
}

PlanePoint ConicLevelSet::plane_point_at(double theta) const {
  double a, b, ang;
  principal_axes(a, b, ang);
  const double u = a * std::cos(theta);
  const double v = b * std::sin(theta);
  const double c = std::cos(ang);
  const double s = std::sin(ang);
  return {c * u - s * v, s * u + c * v};
}

double ConicLevelSet::residual(PlanePoint p) const {
  return q11_ * p.x * p.x + 2.0 * q12_ * p.x * p.y + q22_ * p.y * p.y - 1.0;
}

ConicLevelSet energy_contour(const Spectrum& spectrum, double target) {
  spectrum.require_three_level();
  if (!std::isfinite(target)) {
    throw Error(ErrorCode::InvalidArgument, "target value must be finite");
  }
  const double e3 = spectrum[2];
  if (!(target > e3)) {
    throw Error(ErrorCode::DegenerateContour,
                "target does not exceed the minimum eigenvalue; "
                "contour is empty or a point");
  }
  if (target > std::max(spectrum[0], spectrum[1])) {
    throw Error(ErrorCode::TargetUnattainable,
                "target exceeds the largest eigenvalue reachable in the "
                "two-coefficient chart");
  }
  ConicLevelSet conic((spectrum[0] - e3) / (target - e3), 0.0,
                      (spectrum[1] - e3) / (target - e3));
  conic.spectrum_ = spectrum;
  conic.target_ = target;
  return conic;
}

ContourSamples sample_contour(const ConicLevelSet& conic, std::size_t count) {
  if (count < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "contour sampling needs at least three points");
  }
  ContourSamples out;
  out.theta.reserve(count);
  out.points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) /
                         static_cast<double>(count);
    const PlanePoint p = conic.plane_point_at(theta);
    if (p.x * p.x + p.y * p.y > 1.0 + kChartTol) {
      ++out.dropped;
      continue;
    }
    out.theta.push_back(theta);
    out.points.emplace_back(p.x, p.y);
  }
  return out;
}

ContourPoint contour_point_at(const ConicLevelSet& conic, double theta) {
  const PlanePoint p = conic.plane_point_at(theta);
  if (p.x * p.x + p.y * p.y > 1.0 + kChartTol) {
    std::ostringstream os;
    os << "contour point at parameter " << theta
       << " leaves the unit-sphere chart";
    throw ChartExitError(theta, os.str());
  }
  return ContourPoint(p.x, p.y);
}

double contour_residual(const ConicLevelSet& conic, const ContourPoint& p) {
  return conic.residual(p.plane());
}

PerturbedContour perturb_contour(const ConicLevelSet& conic,
                                 std::span<const ContourPoint> points,
                                 double d_target) {
  if (!conic.spectrum() || !conic.target()) {
    throw Error(ErrorCode::InvalidArgument,
                "perturbation needs a contour built from a spectrum and "
                "target value");
  }
  const Spectrum& spec = *conic.spectrum();
  const double t = *conic.target();
  if (!std::isfinite(d_target)) {
    throw Error(ErrorCode::InvalidArgument, "target step must be finite");
  }
  for (const ContourPoint& p : points) {
    if (std::abs(contour_residual(conic, p)) > kContourMembershipTol) {
      throw Error(ErrorCode::OffContour,
                  "perturbation input point " +
                      format_point(p.a1(), p.a2()) +
                      " is not on the contour");
    }
  }

  // Exact conic at the stepped target; this also validates the step.
  PerturbedContour result{energy_contour(spec, t + d_target), {}};
  result.points.reserve(points.size());

  // Differential of the normalized form: d(quad_ii) = -quad_ii/(t - E_3) dE.
  const double e3 = spec[2];
  const double dq11 = -conic.q11() / (t - e3) * d_target;
  const double dq22 = -conic.q22() / (t - e3) * d_target;

  for (const ContourPoint& p : points) {
    const double gx = conic.q11() * p.a1();  // quad . a (diagonal quad)
    const double gy = conic.q22() * p.a2();
    const double glen = std::hypot(gx, gy);
    if (!(glen > 1e-12)) {
      throw Error(ErrorCode::DegenerateContour,
                  "contour normal vanishes at " +
                      format_point(p.a1(), p.a2()));
    }
    const double nx = gx / glen;
    const double ny = gy / glen;
    // First-order step along the normal cancelling the linearized residual:
    // 2 (a . quad n) delta = -(a . dquad a).
    const double denom = 2.0 * (p.a1() * conic.q11() * nx +
                                p.a2() * conic.q22() * ny);
    const double dres = dq11 * p.a1() * p.a1() + dq22 * p.a2() * p.a2();
    const double delta = -dres / denom;
    result.points.push_back({p.a1() + delta * nx, p.a2() + delta * ny});
  }
  return result;
}

Polyline conic_polyline(const ConicLevelSet& conic, std::size_t samples) {
  if (samples < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "conic polyline needs at least three samples");
  }
  Polyline line;
  line.closed = true;
  line.points.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) /
                         static_cast<double>(samples);
    line.points.push_back(conic.plane_point_at(theta));
  }
  return line;
}

double signed_distance_to_contour(const ConicLevelSet& conic, PlanePoint q) {
  const PolylineDistance dist(conic_polyline(conic));
  return dist.signed_distance(q);
}

ThetaContours theta_contour(const ObservableMatrix& obs, double target,
                            std::size_t resolution) {
  if (obs.size() != 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "plane contours need a three-dimensional observable");
  }
  if (resolution < 16) {
    throw Error(ErrorCode::InvalidArgument,
                "contour resolution must be at least 16");
  }
  if (!std::isfinite(target)) {
    throw Error(ErrorCode::InvalidArgument, "target value must be finite");
  }

  const std::size_t n = resolution + 1;
  const double h = 2.0 / static_cast<double>(resolution);
  std::vector<double> values(n * n, 0.0);
  std::vector<unsigned char> valid(n * n, 0);

  double max_abs = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = -1.0 + static_cast<double>(j) * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -1.0 + static_cast<double>(i) * h;
      const double rsq = x * x + y * y;
      if (rsq > 1.0) continue;
      const double a3 = std::sqrt(1.0 - rsq);
      const double v[3] = {x, y, a3};
      double f = 0.0;
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          f += v[r] * obs(r, c) * v[c];
        }
      }
      values[j * n + i] = f - target;
      valid[j * n + i] = 1;
      max_abs = std::max(max_abs, std::abs(f - target));
    }
  }

  ThetaContours out;
  if (max_abs <= 1e-12) {
    // Observable constant at the target over the whole disk.
    out.degenerate_field = true;
    return out;
  }

  detail::MarchGrid grid{n, n, -1.0, -1.0, h, h, values.data(), valid.data()};
  out.lines = detail::march_zero_contours(grid);
  return out;
}

namespace {

// Roots of the diagonal pair solved in (a1^2, a2^2) by elimination.
std::vector<PlanePoint> intersect_diagonal(const ConicLevelSet& c1,
                                           const ConicLevelSet& c2) {
  const double det = c1.q11() * c2.q22() - c2.q11() * c1.q22();
  const double scale = std::max({std::abs(c1.q11() * c2.q22()),
                                 std::abs(c2.q11() * c1.q22()), 1e-300});
  if (std::abs(det) <= 1e-12 * scale) return {};  // parallel forms, no root

  const double u = (c2.q22() - c1.q22()) / det;  // a1^2
  const double v = (c1.q11() - c2.q11()) / det;  // a2^2
  if (u < -1e-12 || v < -1e-12) return {};

  const double x = std::sqrt(std::max(0.0, u));
  const double y = std::sqrt(std::max(0.0, v));
  std::vector<PlanePoint> pts;
  for (double sx : {1.0, -1.0}) {
    if (x == 0.0 && sx < 0.0) continue;
    for (double sy : {1.0, -1.0}) {
      if (y == 0.0 && sy < 0.0) continue;
      pts.push_back({sx * x, sy * y});
    }
  }
  return pts;
}

// Newton polish of the two-residual system from a starting plane point.
bool newton_refine(const ConicLevelSet& c1, const ConicLevelSet& c2,
                   PlanePoint& p) {
  for (int it = 0; it < 40; ++it) {
    const double r1 = c1.residual(p);
    const double r2 = c2.residual(p);
    if (std::abs(r1) < 1e-13 && std::abs(r2) < 1e-13) return true;
    const double j11 = 2.0 * (c1.q11() * p.x + c1.q12() * p.y);
    const double j12 = 2.0 * (c1.q12() * p.x + c1.q22() * p.y);
    const double j21 = 2.0 * (c2.q11() * p.x + c2.q12() * p.y);
    const double j22 = 2.0 * (c2.q12() * p.x + c2.q22() * p.y);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14) return false;
    p.x -= (r1 * j22 - r2 * j12) / det;
    p.y -= (r2 * j11 - r1 * j21) / det;
  }
  return false;
}

// Walk one conic's ellipse parameter and root-find the other's residual.
std::vector<PlanePoint> intersect_by_scan(const ConicLevelSet& walk,
                                          const ConicLevelSet& other) {
  constexpr std::size_t kScan = 8192;
  std::vector<double> res(kScan);
  for (std::size_t k = 0; k < kScan; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) /
                         static_cast<double>(kScan);
    res[k] = other.residual(walk.plane_point_at(theta));
  }

  auto theta_of = [&](double k) {
    return kTwoPi * k / static_cast<double>(kScan);
  };

  std::vector<PlanePoint> pts;
  auto add_root = [&](double theta_lo, double theta_hi) {
    // Bisect the other conic's residual along the walked ellipse.
    double lo = theta_lo, hi = theta_hi;
    double flo = other.residual(walk.plane_point_at(lo));
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = other.residual(walk.plane_point_at(mid));
      if ((flo <= 0.0) == (fmid <= 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    PlanePoint p = walk.plane_point_at(0.5 * (lo + hi));
    if (!newton_refine(walk, other, p)) return;
    for (const PlanePoint& q : pts) {
      if (std::hypot(q.x - p.x, q.y - p.y) < 1e-8) return;
    }
    pts.push_back(p);
  };

  for (std::size_t k = 0; k < kScan; ++k) {
    const std::size_t k1 = (k + 1) % kScan;
    if ((res[k] <= 0.0) != (res[k1] <= 0.0)) {
      add_root(theta_of(static_cast<double>(k)),
               theta_of(static_cast<double>(k + 1)));
    }
  }

  // Tangency probe: local minima of |residual| close to zero may carry
  // double roots that never change sign.
  for (std::size_t k = 0; k < kScan; ++k) {
    const double a = std::abs(res[(k + kScan - 1) % kScan]);
    const double b = std::abs(res[k]);
    const double c = std::abs(res[(k + 1) % kScan]);
    if (b <= a && b <= c && b < 1e-4) {
      PlanePoint p = walk.plane_point_at(theta_of(static_cast<double>(k)));
      if (newton_refine(walk, other, p)) {
        bool dup = false;
        for (const PlanePoint& q : pts) {
          if (std::hypot(q.x - p.x, q.y - p.y) < 1e-8) dup = true;
        }
        if (!dup) pts.push_back(p);
      }
    }
  }
  return pts;
}

}  // namespace

std::vector<PlanePoint> intersect_conics(const ConicLevelSet& c1,
                                         const ConicLevelSet& c2) {
  const double scale =
      std::max({1.0, std::abs(c1.q11()), std::abs(c1.q12()),
                std::abs(c1.q22()), std::abs(c2.q11()), std::abs(c2.q12()),
                std::abs(c2.q22())});
  if (std::abs(c1.q11() - c2.q11()) <= 1e-12 * scale &&
      std::abs(c1.q12() - c2.q12()) <= 1e-12 * scale &&
      std::abs(c1.q22() - c2.q22()) <= 1e-12 * scale) {
    throw Error(ErrorCode::IdenticalConics,
                "conics coincide; intersection is the whole contour");
  }

  if (c1.is_diagonal() && c2.is_diagonal()) {
    return intersect_diagonal(c1, c2);
  }
  if (c1.is_ellipse()) return intersect_by_scan(c1, c2);
  if (c2.is_ellipse()) return intersect_by_scan(c2, c1);
  throw Error(ErrorCode::InvalidArgument,
              "general intersection needs at least one bounded conic");
}

}  // namespace qls
