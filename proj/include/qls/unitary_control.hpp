#ifndef QLS_UNITARY_CONTROL_HPP
#define QLS_UNITARY_CONTROL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qls/contour_geometry.hpp"
#include "qls/state_space.hpp"

namespace qls {

inline constexpr double kOrthogonalityTol = 1e-12;
inline constexpr double kDeterminantTol = 1e-10;

/// Real orthogonal matrix; the control step acting on coefficient vectors.
class OrthogonalMap {
 public:
  /// Row-major entries; validated against U^T U = I (1e-12 max-abs) and
  /// |det U| = 1 (1e-10).
  OrthogonalMap(std::size_t n, std::vector<double> entries);

  static OrthogonalMap identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

  StateVec apply(const StateVec& state) const;
  /// this . other (other acts first).
  OrthogonalMap compose(const OrthogonalMap& other) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// One state's path across contours: maps[k] sends waypoints[k] to
/// waypoints[k+1].
struct Trajectory {
  std::vector<StateVec> waypoints;
  std::vector<OrthogonalMap> maps;

  /// Product of all hops (last hop leftmost).
  OrthogonalMap composed() const;
};

/// Minimal rotation in the plane of p and q sending p to q; identity on the
/// orthogonal complement. Antipodal pairs rotate by pi in the plane of p and
/// the lowest-index basis vector not parallel to p.
OrthogonalMap rotation_between(const StateVec& p, const StateVec& q);

/// One map per point, each sending its point to the anchor. Anchor and all
/// points must lie on the contour.
std::vector<OrthogonalMap> contract_level_set(const ConicLevelSet& contour,
                                              std::span<const StateVec> points,
                                              const StateVec& anchor);

/// Map carrying the source contour's anchor onto the target contour's.
OrthogonalMap transfer_anchor(const ConicLevelSet& source, const StateVec& p_o,
                              const ConicLevelSet& target,
                              const StateVec& q_o);

/// One map per target, each sending the anchor to that target.
std::vector<OrthogonalMap> expand_to_level_set(const ConicLevelSet& contour,
                                               const StateVec& q_o,
                                               std::span<const StateVec> targets);

/// Contract source points to p_o, transfer p_o to q_o, expand to the
/// assigned targets; one trajectory per source point with waypoints
/// [p_k, p_o, q_o, q_k].
std::vector<Trajectory> three_step_protocol(
    const ConicLevelSet& source, std::span<const StateVec> source_points,
    const StateVec& p_o, const ConicLevelSet& target, const StateVec& q_o,
    std::span<const StateVec> target_assignment);

struct DirectMapResult {
  StateVec destination;
  OrthogonalMap map;
};

/// Carries p to the destination contour's point of equal ellipse parameter
/// (the one-step rescaling transition). Throws ChartExitError with the
/// parameter when the destination leaves the unit-sphere chart.
DirectMapResult direct_map(const ConicLevelSet& source, const StateVec& p,
                           const ConicLevelSet& destination);

struct WitnessPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double inner = 0.0;
};

/// Finds a pair of points whose inner product differs from 1: since
/// orthogonal maps preserve inner products and <anchor, anchor> = 1, such a
/// pair rules out a single map sending every point to the anchor. Returns
/// nothing iff all points coincide.
std::optional<WitnessPair> no_universal_unitary_witness(
    std::span<const StateVec> points, const StateVec& anchor);

}  // namespace qls

#endif
