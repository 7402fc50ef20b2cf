#include "qls/oscillator_lattice.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qls {

namespace {

void require_positive_frequency(const Rational& w, const char* name) {
  if (!w.is_positive()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(name) + " must be a positive frequency");
  }
}

void require_non_negative(LatticePoint p) {
  if (p.nx < 0 || p.ny < 0) {
    throw Error(ErrorCode::NegativeOccupation,
                "lattice occupations must be non-negative");
  }
}

}  // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "rational denominator is zero");
  }
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator+(const Rational& o) const {
  const long long g = std::gcd(den_, o.den_);
  const long long scale = o.den_ / g;
  return Rational(num_ * scale + o.num_ * (den_ / g), den_ * scale);
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num_, o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  // Cross-reduce before multiplying to keep intermediates small.
  const long long g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
  const long long g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
  return Rational((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "division by zero rational");
  }
  return *this * Rational(o.den_, o.num_);
}

StiffnessMatrix::StiffnessMatrix(double k11, double k12, double k22)
    : k11_(k11), k12_(k12), k22_(k22) {
  if (!std::isfinite(k11_) || !std::isfinite(k12_) || !std::isfinite(k22_)) {
    throw Error(ErrorCode::InvalidArgument,
                "stiffness entries must be finite");
  }
}

bool StiffnessMatrix::is_positive_definite() const {
  return k11_ > 0.0 && k11_ * k22_ - k12_ * k12_ > 0.0;
}

std::pair<double, double> frequencies_from_K(const StiffnessMatrix& k) {
  if (!k.is_positive_definite()) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "stiffness matrix must be positive definite");
  }
  const double mean = 0.5 * (k.k11() + k.k22());
  const double r = std::hypot(0.5 * (k.k11() - k.k22()), k.k12());
  return {std::sqrt(mean + r), std::sqrt(mean - r)};
}

Rational energy_of(LatticePoint p, const Rational& wx, const Rational& wy,
                   bool include_zero_point) {
  require_non_negative(p);
  require_positive_frequency(wx, "omega_x");
  require_positive_frequency(wy, "omega_y");
  if (include_zero_point) {
    return Rational(2 * p.nx + 1, 2) * wx + Rational(2 * p.ny + 1, 2) * wy;
  }
  return Rational(p.nx) * wx + Rational(p.ny) * wy;
}

std::vector<LatticePoint> level_set_points(const Rational& energy,
                                           const Rational& wx,
                                           const Rational& wy, long long n_max,
                                           bool include_zero_point) {
  require_positive_frequency(wx, "omega_x");
  require_positive_frequency(wy, "omega_y");
  if (n_max < 0) {
    throw Error(ErrorCode::InvalidArgument, "search box must be non-negative");
  }
  std::vector<LatticePoint> points;
  for (long long nx = 0; nx <= n_max; ++nx) {
    // energy_of at (nx, 0) already carries the n_y = 0 zero-point share,
    // so the remainder is exactly n_y * w_y in either flag state.
    const Rational rest =
        energy - energy_of({nx, 0}, wx, wy, include_zero_point);
    const Rational ny_exact = rest / wy;
    if (!ny_exact.is_integer()) continue;
    const long long ny = ny_exact.num();
    if (ny < 0 || ny > n_max) continue;
    points.push_back({nx, ny});
  }
  return points;
}

std::size_t degeneracy(const Rational& energy, const Rational& wx,
                       const Rational& wy, long long n_max,
                       bool include_zero_point) {
  return level_set_points(energy, wx, wy, n_max, include_zero_point).size();
}

std::vector<PulsePlan> plan_transition(LatticePoint from,
                                       const Rational& target_energy,
                                       const Rational& wx, const Rational& wy,
                                       bool include_zero_point,
                                       long long n_max) {
  require_non_negative(from);
  const std::vector<LatticePoint> targets =
      level_set_points(target_energy, wx, wy, n_max, include_zero_point);
  if (targets.empty()) {
    std::ostringstream os;
    os << "no lattice point inside [0, " << n_max
       << "]^2 has the target energy " << target_energy.num() << "/"
       << target_energy.den();
    throw Error(ErrorCode::UnreachableTarget, os.str());
  }

  // Nearest target by total quanta moved; level_set_points is sorted by
  // n_x, so the first minimum resolves ties toward the smaller n_x.
  const LatticePoint* best = nullptr;
  long long best_cost = 0;
  for (const LatticePoint& t : targets) {
    const long long cost =
        std::llabs(t.nx - from.nx) + std::llabs(t.ny - from.ny);
    if (best == nullptr || cost < best_cost) {
      best = &t;
      best_cost = cost;
    }
  }

  const long long dx = best->nx - from.nx;
  const long long dy = best->ny - from.ny;

  const auto step = [&](Axis axis, long long delta) {
    const Rational& w = axis == Axis::X ? wx : wy;
    return PulseStep{axis, delta, Rational(delta < 0 ? -delta : delta) * w};
  };

  if (dx == 0 && dy == 0) return {PulsePlan{}};  // already on the level set
  if (dx == 0) return {PulsePlan{{step(Axis::Y, dy)}}};
  if (dy == 0) return {PulsePlan{{step(Axis::X, dx)}}};
  return {PulsePlan{{step(Axis::Y, dy), step(Axis::X, dx)}},
          PulsePlan{{step(Axis::X, dx), step(Axis::Y, dy)}}};
}

LatticePoint apply_pulse(LatticePoint p, const PulseStep& step) {
  require_non_negative(p);
  LatticePoint next = p;
  if (step.axis == Axis::X) {
    next.nx += step.delta_quanta;
  } else {
    next.ny += step.delta_quanta;
  }
  if (next.nx < 0 || next.ny < 0) {
    std::ostringstream os;
    os << "pulse would drive occupation below zero: (" << p.nx << ", " << p.ny
       << ") + " << step.delta_quanta << " on "
       << (step.axis == Axis::X ? "x" : "y");
    throw Error(ErrorCode::NegativeOccupation, os.str());
  }
  return next;
}

}  // namespace qls
