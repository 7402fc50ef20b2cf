#include "qls/unitary_control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qls {

namespace {

double det_by_elimination(std::size_t n, std::vector<double> m) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (m[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(m[pivot * n + c], m[col * n + c]);
      }
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      for (std::size_t c = col; c < n; ++c) {
        m[r * n + c] -= f * m[col * n + c];
      }
    }
  }
  return det;
}

void require_unit(const StateVec& s, const char* role) {
  if (std::abs(s.norm() - 1.0) > kNormOperationTol) {
    throw Error(ErrorCode::NotNormalized,
                std::string(role) + " state is not unit norm");
  }
}

// Membership of a state's plane coordinates on the contour.
void require_on_contour(const ConicLevelSet& contour, const StateVec& s,
                        const char* role) {
  if (s.size() != 3) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(role) + " state must be three-dimensional");
  }
  require_unit(s, role);
  const double res = contour.residual({s[0], s[1]});
  if (std::abs(res) > kContourMembershipTol) {
    std::ostringstream os;
    os << role << " state (" << s[0] << ", " << s[1] << ", " << s[2]
       << ") is off its contour (residual " << res << ")";
    throw Error(ErrorCode::OffContour, os.str());
  }
}

}  // namespace

OrthogonalMap::OrthogonalMap(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 2 || entries_.size() != n_ * n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix entries do not match its dimension");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "matrix entries must be finite");
    }
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n_; ++k) {
        dot += entries_[k * n_ + i] * entries_[k * n_ + j];
      }
      defect = std::max(defect, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  if (defect > kOrthogonalityTol) {
    std::ostringstream os;
    os << "matrix is not orthogonal (U^T U deviates by " << defect << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  const double det = det_by_elimination(n_, entries_);
  if (std::abs(std::abs(det) - 1.0) > kDeterminantTol) {
    std::ostringstream os;
    os << "matrix determinant " << det << " is not +-1";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

OrthogonalMap OrthogonalMap::identity(std::size_t n) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return OrthogonalMap(n, std::move(m));
}

StateVec OrthogonalMap::apply(const StateVec& state) const {
  if (state.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "state dimension does not match the map");
  }
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n_; ++j) v += entries_[i * n_ + j] * state[j];
    out[i] = v;
  }
  return StateVec(std::move(out));
}

OrthogonalMap OrthogonalMap::compose(const OrthogonalMap& other) const {
  if (other.n_ != n_) {
    throw Error(ErrorCode::DimensionMismatch, "map dimensions differ");
  }
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = entries_[i * n_ + k];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        out[i * n_ + j] += a * other.entries_[k * n_ + j];
      }
    }
  }
  return OrthogonalMap(n_, std::move(out));
}

OrthogonalMap Trajectory::composed() const {
  if (maps.empty()) {
    throw Error(ErrorCode::InvalidArgument, "trajectory has no hops");
  }
  OrthogonalMap u = maps.front();
  for (std::size_t k = 1; k < maps.size(); ++k) u = maps[k].compose(u);
  return u;
}

OrthogonalMap rotation_between(const StateVec& p, const StateVec& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimensions differ");
  }
  require_unit(p, "rotation source");
  require_unit(q, "rotation destination");
  const std::size_t n = p.size();

  const double c = p.dot(q);
  std::vector<double> w(n);
  double wn2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = q[i] - c * p[i];
    wn2 += w[i] * w[i];
  }
  const double wn = std::sqrt(wn2);

  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;

  if (wn < 1e-14) {
    if (c > 0.0) return OrthogonalMap(n, std::move(m));  // p == q
    // Antipodal: rotate by pi in the plane of p and a fixed companion.
    std::size_t k = 0;
    while (k < n && std::abs(p[k]) > 0.9) ++k;
    std::vector<double> v(n);
    double vn2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = (i == k ? 1.0 : 0.0) - p[k] * p[i];
      vn2 += v[i] * v[i];
    }
    const double vn = std::sqrt(vn2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m[i * n + j] -=
            2.0 * (p[i] * p[j] + (v[i] / vn) * (v[j] / vn));
      }
    }
    return OrthogonalMap(n, std::move(m));
  }

  // R = I + (c - 1)(p p^T + v v^T) + wn (v p^T - p v^T), v = w / |w|.
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = w[i] / wn;
    for (std::size_t j = 0; j < n; ++j) {
      const double vj = w[j] / wn;
      m[i * n + j] += (c - 1.0) * (p[i] * p[j] + vi * vj) +
                      wn * (vi * p[j] - p[i] * vj);
    }
  }
  return OrthogonalMap(n, std::move(m));
}

std::vector<OrthogonalMap> contract_level_set(const ConicLevelSet& contour,
                                              std::span<const StateVec> points,
                                              const StateVec& anchor) {
  require_on_contour(contour, anchor, "anchor");
  std::vector<OrthogonalMap> maps;
  maps.reserve(points.size());
  for (const StateVec& p : points) {
    require_on_contour(contour, p, "contour");
    maps.push_back(rotation_between(p, anchor));
  }
  return maps;
}

OrthogonalMap transfer_anchor(const ConicLevelSet& source, const StateVec& p_o,
                              const ConicLevelSet& target,
                              const StateVec& q_o) {
  require_on_contour(source, p_o, "source anchor");
  require_on_contour(target, q_o, "target anchor");
  return rotation_between(p_o, q_o);
}

std::vector<OrthogonalMap> expand_to_level_set(
    const ConicLevelSet& contour, const StateVec& q_o,
    std::span<const StateVec> targets) {
  require_on_contour(contour, q_o, "anchor");
  std::vector<OrthogonalMap> maps;
  maps.reserve(targets.size());
  for (const StateVec& q : targets) {
    require_on_contour(contour, q, "target");
    maps.push_back(rotation_between(q_o, q));
  }
  return maps;
}

std::vector<Trajectory> three_step_protocol(
    const ConicLevelSet& source, std::span<const StateVec> source_points,
    const StateVec& p_o, const ConicLevelSet& target, const StateVec& q_o,
    std::span<const StateVec> target_assignment) {
  if (source_points.size() != target_assignment.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "each source point needs exactly one assigned target");
  }
  const std::vector<OrthogonalMap> contract =
      contract_level_set(source, source_points, p_o);
  const OrthogonalMap transfer = transfer_anchor(source, p_o, target, q_o);
  const std::vector<OrthogonalMap> expand =
      expand_to_level_set(target, q_o, target_assignment);

  std::vector<Trajectory> trajectories;
  trajectories.reserve(source_points.size());
  for (std::size_t k = 0; k < source_points.size(); ++k) {
    Trajectory t;
    t.waypoints = {source_points[k], p_o, q_o, target_assignment[k]};
    t.maps = {contract[k], transfer, expand[k]};
    trajectories.push_back(std::move(t));
  }
  return trajectories;
}

DirectMapResult direct_map(const ConicLevelSet& source, const StateVec& p,
                           const ConicLevelSet& destination) {
  require_on_contour(source, p, "source");

  double a1, b1, ang1;
  source.principal_axes(a1, b1, ang1);
  if (std::abs(ang1) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument,
                "equal-parameter transitions need axis-aligned contours");
  }
  const double theta = std::atan2(p[1] / b1, p[0] / a1);

  const ContourPoint q = contour_point_at(destination, theta);
  const StateVec q_state = q.to_state();
  return DirectMapResult{q_state, rotation_between(p, q_state)};
}

std::optional<WitnessPair> no_universal_unitary_witness(
    std::span<const StateVec> points, const StateVec& anchor) {
  if (points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "witness search needs at least two points");
  }
  require_unit(anchor, "anchor");
  for (const StateVec& p : points) {
    if (p.size() != anchor.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "witness points must match the anchor dimension");
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double inner = points[i].dot(points[j]);
      if (std::abs(inner - 1.0) > 1e-9) {
        return WitnessPair{i, j, inner};
      }
    }
  }
  return std::nullopt;
}

}  // namespace qls
