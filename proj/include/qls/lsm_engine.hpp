#ifndef QLS_LSM_ENGINE_HPP
#define QLS_LSM_ENGINE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qls/contour_geometry.hpp"
#include "qls/geometry.hpp"

namespace qls {

struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double h = 0.0;
  PlanePoint origin;  // lower-left node
};

/// Level-set function sampled on a uniform grid, row-major with x fastest.
class ScalarGridField {
 public:
  ScalarGridField(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t nx() const noexcept { return spec_.nx; }
  std::size_t ny() const noexcept { return spec_.ny; }
  double h() const noexcept { return spec_.h; }

  double at(std::size_t i, std::size_t j) const {
    return values_[j * spec_.nx + i];
  }
  double& at(std::size_t i, std::size_t j) {
    return values_[j * spec_.nx + i];
  }
  PlanePoint node(std::size_t i, std::size_t j) const {
    return {spec_.origin.x + static_cast<double>(i) * spec_.h,
            spec_.origin.y + static_cast<double>(j) * spec_.h};
  }

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Normal speed of the moving front: a single constant or one value per
/// grid node. Positive speed moves the front outward (toward positive phi).
class SpeedField {
 public:
  static SpeedField constant(double f);
  static SpeedField per_node(std::size_t nx, std::size_t ny,
                             std::vector<double> values);

  double at(std::size_t i, std::size_t j) const {
    return constant_ ? f_ : values_[j * nx_ + i];
  }
  double max_abs() const;
  void require_shape(std::size_t nx, std::size_t ny) const;

 private:
  SpeedField() = default;
  bool constant_ = true;
  double f_ = 0.0;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<double> values_;
};

enum class GridClass : unsigned char { Outside = 0, Interface = 1, Inside = 2 };

struct GridPartition {
  std::size_t nx = 0, ny = 0;
  std::vector<GridClass> labels;  // row-major, x fastest

  GridClass at(std::size_t i, std::size_t j) const { return labels[j * nx + i]; }
};

/// Signed distance to a closed polyline, sampled at every node; negative
/// inside. The polyline must stay at least 2h away from the domain edge.
ScalarGridField init_from_polyline(const Polyline& contour,
                                   const GridSpec& spec);

/// Same, for a conic contour (densely sampled internally).
ScalarGridField init_from_contour(const ConicLevelSet& contour,
                                  const GridSpec& spec);

/// Advances phi under normal flow phi_t + F |grad phi| = 0 with Godunov
/// upwinding and forward-Euler steps at CFL number 0.5.
ScalarGridField evolve(const ScalarGridField& field, const SpeedField& speed,
                       double t_final);

/// Splits nodes into outside / interface / inside. A node is interface when
/// some 4-neighbor lies on the other side of the zero level and the node is
/// the nearer of the pair (|phi| not larger than the neighbor's), so each
/// sign change contributes its best-approximating nodes only. phi = 0 counts
/// as the inside side.
GridPartition classify_grid(const ScalarGridField& field);

/// Rebuilds phi as a signed distance to its own zero level set by fast
/// sweeping: interface-adjacent nodes are pinned from linear interpolation
/// of the zero crossing, then the four diagonal sweep orders run until the
/// largest update drops below 1e-6 h.
ScalarGridField reinitialize(const ScalarGridField& field);

/// Zero-level polylines by marching squares with linear interpolation.
std::vector<Polyline> extract_interface(const ScalarGridField& field);

/// Flat CSV: one metadata header (nx, ny, h, origin), then ny rows of nx
/// phi values, row-major from the lower-left node.
std::string field_to_csv(const ScalarGridField& field);

}  // namespace qls

#endif
