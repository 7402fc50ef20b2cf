#ifndef QLS_CONTOUR_GEOMETRY_HPP
#define QLS_CONTOUR_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qls/geometry.hpp"
#include "qls/state_space.hpp"

namespace qls {

inline constexpr double kContourMembershipTol = 1e-9;
inline constexpr double kChartTol = 1e-12;
inline constexpr std::size_t kDistancePolylineSamples = 4096;

/// Point of a contour in the (a1, a2) plane, lifted back to the unit
/// sphere on the non-negative a3 branch.
class ContourPoint {
 public:
  /// Throws ChartExitError when a1^2 + a2^2 exceeds 1 beyond tolerance.
  ContourPoint(double a1, double a2);

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  double a3() const noexcept { return a3_; }

  PlanePoint plane() const noexcept { return {a1_, a2_}; }
  StateVec to_state() const { return StateVec({a1_, a2_, a3_}); }

 private:
  double a1_, a2_, a3_;
};

/// Constant-expectation-value contour as a normalized quadratic form:
/// (a1 a2) quad (a1 a2)^T = 1. Energy contours carry their spectrum and
/// target value so they can be perturbed.
class ConicLevelSet {
 public:
  static ConicLevelSet from_quad(double q11, double q12, double q22);

  double q11() const noexcept { return q11_; }
  double q12() const noexcept { return q12_; }
  double q22() const noexcept { return q22_; }

  bool is_diagonal(double tol = 1e-15) const;
  /// Both eigenvalues strictly positive (contour is an ellipse).
  bool is_ellipse() const;

  /// Principal-frame description: semi-axes and the frame rotation angle
  /// (zero for diagonal quads). Throws unless the conic is an ellipse.
  void principal_axes(double& semi_a, double& semi_b, double& angle) const;

  /// Ellipse point at eccentric anomaly theta, in the plane.
  PlanePoint plane_point_at(double theta) const;

  double residual(PlanePoint p) const;

  const std::optional<Spectrum>& spectrum() const noexcept { return spectrum_; }
  std::optional<double> target() const noexcept { return target_; }

 private:
  ConicLevelSet(double q11, double q12, double q22);
  friend ConicLevelSet energy_contour(const Spectrum&, double);

  double q11_, q12_, q22_;
  std::optional<Spectrum> spectrum_;
  std::optional<double> target_;
};

/// Builds the energy ellipse for a three-level spectrum:
/// quad = diag((E_1 - E_3)/(t - E_3), (E_2 - E_3)/(t - E_3)).
ConicLevelSet energy_contour(const Spectrum& spectrum, double target);

struct ContourSamples {
  std::vector<double> theta;        // kept parameters, one per point
  std::vector<ContourPoint> points;
  std::size_t dropped = 0;          // samples outside the unit-sphere chart
};

/// m uniformly spaced eccentric-anomaly samples; chart-exiting samples are
/// dropped and counted.
ContourSamples sample_contour(const ConicLevelSet& conic, std::size_t count);

/// Single chart point at the given parameter; throws ChartExitError when
/// the ellipse leaves the unit disk there.
ContourPoint contour_point_at(const ConicLevelSet& conic, double theta);

/// a^T quad a - 1 for the lifted point's plane coordinates.
double contour_residual(const ConicLevelSet& conic, const ContourPoint& p);

struct PerturbedContour {
  ConicLevelSet conic;              // exact conic at target + dE
  std::vector<PlanePoint> points;   // first-order updated plane points
};

/// First-order motion of contour points under a small change of the target
/// expectation value: each point moves along the conic normal by the step
/// that cancels the linearized residual. Requires an energy-built conic.
PerturbedContour perturb_contour(const ConicLevelSet& conic,
                                 std::span<const ContourPoint> points,
                                 double d_target);

/// Distance to a dense polyline of the conic, negative inside.
double signed_distance_to_contour(const ConicLevelSet& conic, PlanePoint q);

/// Dense polyline of the conic in the plane (used for distance queries and
/// grid initialization).
Polyline conic_polyline(const ConicLevelSet& conic,
                        std::size_t samples = kDistancePolylineSamples);

struct ThetaContours {
  std::vector<Polyline> lines;
  /// Set when the observable is constant at the target over the whole
  /// disk, i.e. the level set is the disk itself.
  bool degenerate_field = false;
};

/// Marching-squares zero contours of <theta>(a1, a2) - target over the
/// unit disk, on an (resolution+1)^2 node grid spanning [-1, 1]^2.
/// Polylines clipped at the disk boundary stay open.
ThetaContours theta_contour(const ObservableMatrix& obs, double target,
                            std::size_t resolution);

/// All real intersection points of two conics (both with rhs 1).
/// Diagonal pairs are solved in closed form; general symmetric quads go
/// through a dense scan with Newton refinement. Identical conics are an
/// error, disjoint conics give an empty list.
std::vector<PlanePoint> intersect_conics(const ConicLevelSet& c1,
                                         const ConicLevelSet& c2);

}  // namespace qls

#endif
