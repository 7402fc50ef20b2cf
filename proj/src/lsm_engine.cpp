#include "qls/lsm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "marching_squares.hpp"

namespace qls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool inside_side(double phi) { return phi <= 0.0; }

}  // namespace

ScalarGridField::ScalarGridField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (spec_.nx < 3 || spec_.ny < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "grid needs at least 3x3 nodes");
  }
  if (!(spec_.h > 0.0) || !std::isfinite(spec_.h) ||
      !std::isfinite(spec_.origin.x) || !std::isfinite(spec_.origin.y)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing/origin invalid");
  }
  if (values_.size() != spec_.nx * spec_.ny) {
    throw Error(ErrorCode::DimensionMismatch,
                "grid value count does not match dimensions");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid values must be finite");
    }
  }
}

SpeedField SpeedField::constant(double f) {
  if (!std::isfinite(f)) {
    throw Error(ErrorCode::BadSpeed, "speed must be finite");
  }
  SpeedField s;
  s.constant_ = true;
  s.f_ = f;
  return s;
}

SpeedField SpeedField::per_node(std::size_t nx, std::size_t ny,
                                std::vector<double> values) {
  if (values.size() != nx * ny) {
    throw Error(ErrorCode::DimensionMismatch,
                "speed value count does not match dimensions");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::BadSpeed, "speeds must be finite");
    }
  }
  SpeedField s;
  s.constant_ = false;
  s.nx_ = nx;
  s.ny_ = ny;
  s.values_ = std::move(values);
  return s;
}

double SpeedField::max_abs() const {
  if (constant_) return std::abs(f_);
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void SpeedField::require_shape(std::size_t nx, std::size_t ny) const {
  if (!constant_ && (nx_ != nx || ny_ != ny)) {
    throw Error(ErrorCode::DimensionMismatch,
                "speed field shape does not match the grid");
  }
}

ScalarGridField init_from_polyline(const Polyline& contour,
                                   const GridSpec& spec) {
  if (!contour.closed || contour.points.size() < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "grid initialization needs a closed contour");
  }
  double min_x = kInf, max_x = -kInf, min_y = kInf, max_y = -kInf;
  for (const PlanePoint& p : contour.points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double margin = 2.0 * spec.h;
  const double dom_max_x =
      spec.origin.x + spec.h * static_cast<double>(spec.nx - 1);
  const double dom_max_y =
      spec.origin.y + spec.h * static_cast<double>(spec.ny - 1);
  if (min_x - spec.origin.x < margin || dom_max_x - max_x < margin ||
      min_y - spec.origin.y < margin || dom_max_y - max_y < margin) {
    std::ostringstream os;
    os << "contour bounding box [" << min_x << ", " << max_x << "] x ["
       << min_y << ", " << max_y << "] leaves less than a 2h = " << margin
       << " margin inside the domain [" << spec.origin.x << ", " << dom_max_x
       << "] x [" << spec.origin.y << ", " << dom_max_y << "]";
    throw Error(ErrorCode::DomainTooSmall, os.str());
  }

  const PolylineDistance dist(contour);
  std::vector<double> phi(spec.nx * spec.ny);
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double y = spec.origin.y + static_cast<double>(j) * spec.h;
    for (std::size_t i = 0; i < spec.nx; ++i) {
      const double x = spec.origin.x + static_cast<double>(i) * spec.h;
      phi[j * spec.nx + i] = dist.signed_distance({x, y});
    }
  }
  return ScalarGridField(spec, std::move(phi));
}

ScalarGridField init_from_contour(const ConicLevelSet& contour,
                                  const GridSpec& spec) {
  return init_from_polyline(conic_polyline(contour), spec);
}

ScalarGridField evolve(const ScalarGridField& field, const SpeedField& speed,
                       double t_final) {
  if (!std::isfinite(t_final) || t_final < 0.0) {
    throw Error(ErrorCode::BadTime, "evolution time must be non-negative");
  }
  speed.require_shape(field.nx(), field.ny());

  const double f_max = speed.max_abs();
  if (t_final == 0.0 || f_max == 0.0) return field;

  const std::size_t nx = field.nx();
  const std::size_t ny = field.ny();
  const double h = field.h();
  const double dt_cfl = 0.5 * h / f_max;

  std::vector<double> cur = field.values();
  std::vector<double> next(cur.size());

  double remaining = t_final;
  while (remaining > 0.0) {
    const double dt = std::min(dt_cfl, remaining);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double c = cur[j * nx + i];
        // One-sided differences stand in for the missing side at edges.
        const double dpx =
            i + 1 < nx ? (cur[j * nx + i + 1] - c) / h
                       : (c - cur[j * nx + i - 1]) / h;
        const double dmx =
            i > 0 ? (c - cur[j * nx + i - 1]) / h
                  : (cur[j * nx + i + 1] - c) / h;
        const double dpy =
            j + 1 < ny ? (cur[(j + 1) * nx + i] - c) / h
                       : (c - cur[(j - 1) * nx + i]) / h;
        const double dmy =
            j > 0 ? (c - cur[(j - 1) * nx + i]) / h
                  : (cur[(j + 1) * nx + i] - c) / h;

        const double f = speed.at(i, j);
        double grad2;
        if (f >= 0.0) {
          grad2 = std::max(dmx, 0.0) * std::max(dmx, 0.0) +
                  std::min(dpx, 0.0) * std::min(dpx, 0.0) +
                  std::max(dmy, 0.0) * std::max(dmy, 0.0) +
                  std::min(dpy, 0.0) * std::min(dpy, 0.0);
        } else {
          grad2 = std::min(dmx, 0.0) * std::min(dmx, 0.0) +
                  std::max(dpx, 0.0) * std::max(dpx, 0.0) +
                  std::min(dmy, 0.0) * std::min(dmy, 0.0) +
                  std::max(dpy, 0.0) * std::max(dpy, 0.0);
        }
        next[j * nx + i] = c - dt * f * std::sqrt(grad2);
      }
    }
    cur.swap(next);
    remaining -= dt;
  }
  return ScalarGridField(field.spec(), std::move(cur));
}

GridPartition classify_grid(const ScalarGridField& field) {
  const std::size_t nx = field.nx();
  const std::size_t ny = field.ny();
  GridPartition part;
  part.nx = nx;
  part.ny = ny;
  part.labels.assign(nx * ny, GridClass::Outside);

  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double c = field.at(i, j);
      const bool side = inside_side(c);
      bool interface_node = false;
      const auto check = [&](std::size_t ni, std::size_t nj) {
        const double m = field.at(ni, nj);
        if (inside_side(m) != side && std::abs(c) <= std::abs(m)) {
          interface_node = true;
        }
      };
      if (i > 0) check(i - 1, j);
      if (i + 1 < nx) check(i + 1, j);
      if (j > 0) check(i, j - 1);
      if (j + 1 < ny) check(i, j + 1);

      part.labels[j * nx + i] = interface_node ? GridClass::Interface
                                : side         ? GridClass::Inside
                                               : GridClass::Outside;
    }
  }
  return part;
}

ScalarGridField reinitialize(const ScalarGridField& field) {
  const std::size_t nx = field.nx();
  const std::size_t ny = field.ny();
  const double h = field.h();

  // Pin interface-adjacent nodes from linear zero crossings; combine the
  // two axis distances when both exist.
  std::vector<double> cross_x(nx * ny, kInf);
  std::vector<double> cross_y(nx * ny, kInf);
  bool any_interface = false;

  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (field.at(i, j) == 0.0) {
        cross_x[j * nx + i] = 0.0;
        any_interface = true;
      }
    }
  }
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double a = field.at(i, j);
      const double b = field.at(i + 1, j);
      if (a * b < 0.0) {
        const double t = a / (a - b);
        auto& da = cross_x[j * nx + i];
        auto& db = cross_x[j * nx + i + 1];
        da = std::min(da, t * h);
        db = std::min(db, (1.0 - t) * h);
        any_interface = true;
      }
    }
  }
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double a = field.at(i, j);
      const double b = field.at(i, j + 1);
      if (a * b < 0.0) {
        const double t = a / (a - b);
        auto& da = cross_y[j * nx + i];
        auto& db = cross_y[(j + 1) * nx + i];
        da = std::min(da, t * h);
        db = std::min(db, (1.0 - t) * h);
        any_interface = true;
      }
    }
  }
  if (!any_interface) {
    throw Error(ErrorCode::NoInterface,
                "field has uniform sign; nothing anchors the distance");
  }

  std::vector<double> d(nx * ny, kInf);
  std::vector<char> frozen(nx * ny, 0);
  for (std::size_t k = 0; k < nx * ny; ++k) {
    const double dx = cross_x[k];
    const double dy = cross_y[k];
    if (dx < kInf && dy < kInf) {
      d[k] = dx == 0.0 || dy == 0.0 ? 0.0
                                    : dx * dy / std::sqrt(dx * dx + dy * dy);
      frozen[k] = 1;
    } else if (dx < kInf) {
      d[k] = dx;
      frozen[k] = 1;
    } else if (dy < kInf) {
      d[k] = dy;
      frozen[k] = 1;
    }
  }

  const auto update = [&](std::size_t i, std::size_t j) -> double {
    const std::size_t k = j * nx + i;
    if (frozen[k]) return 0.0;
    double a = kInf, b = kInf;
    if (i > 0) a = std::min(a, d[k - 1]);
    if (i + 1 < nx) a = std::min(a, d[k + 1]);
    if (j > 0) b = std::min(b, d[k - nx]);
    if (j + 1 < ny) b = std::min(b, d[k + nx]);
    if (a == kInf && b == kInf) return 0.0;
    double cand;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (hi - lo >= h || hi == kInf) {
      cand = lo + h;
    } else {
      const double diff = a - b;
      cand = 0.5 * (a + b + std::sqrt(2.0 * h * h - diff * diff));
    }
    if (cand < d[k]) {
      const double change = d[k] == kInf ? cand : d[k] - cand;
      d[k] = cand;
      return change;
    }
    return 0.0;
  };

  for (int round = 0; round < 50; ++round) {
    double max_change = 0.0;
    // Four diagonal sweep orderings.
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        max_change = std::max(max_change, update(i, j));
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t ii = nx; ii-- > 0;)
        max_change = std::max(max_change, update(ii, j));
    for (std::size_t jj = ny; jj-- > 0;)
      for (std::size_t ii = nx; ii-- > 0;)
        max_change = std::max(max_change, update(ii, jj));
    for (std::size_t jj = ny; jj-- > 0;)
      for (std::size_t i = 0; i < nx; ++i)
        max_change = std::max(max_change, update(i, jj));
    if (max_change < 1e-6 * h) break;
  }

  std::vector<double> out(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      const double phi = field.at(i, j);
      out[k] = phi < 0.0 ? -d[k] : phi > 0.0 ? d[k] : 0.0;
    }
  }
  return ScalarGridField(field.spec(), std::move(out));
}

std::vector<Polyline> extract_interface(const ScalarGridField& field) {
  const std::size_t nx = field.nx();
  const std::size_t ny = field.ny();
  // Same side convention as the marching step: zero counts as positive.
  auto positive = [](double v) { return v >= 0.0; };
  bool crossing = false;
  for (std::size_t j = 0; j < ny && !crossing; ++j) {
    for (std::size_t i = 0; i < nx && !crossing; ++i) {
      const bool side = positive(field.at(i, j));
      if (i + 1 < nx && positive(field.at(i + 1, j)) != side) crossing = true;
      if (j + 1 < ny && positive(field.at(i, j + 1)) != side) crossing = true;
    }
  }
  if (!crossing) return {};

  detail::MarchGrid grid{nx,
                         ny,
                         field.spec().origin.x,
                         field.spec().origin.y,
                         field.h(),
                         field.h(),
                         field.values().data(),
                         nullptr};
  return detail::march_zero_contours(grid);
}

std::string field_to_csv(const ScalarGridField& field) {
  char buf[160];
  std::string out = "nx,ny,h,origin_x,origin_y\n";
  std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g\n", field.nx(),
                field.ny(), field.h(), field.spec().origin.x,
                field.spec().origin.y);
  out += buf;
  out.reserve(out.size() + field.values().size() * 12);
  for (std::size_t j = 0; j < field.ny(); ++j) {
    for (std::size_t i = 0; i < field.nx(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", field.at(i, j));
      out += buf;
      out += i + 1 < field.nx() ? ',' : '\n';
    }
  }
  return out;
}

}  // namespace qls
