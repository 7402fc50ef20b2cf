#ifndef QLS_OSCILLATOR_LATTICE_HPP
#define QLS_OSCILLATOR_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qls/errors.hpp"

namespace qls {

/// Exact fraction with reduced terms and positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long num, long long den = 1);

  long long num() const noexcept { return num_; }
  long long den() const noexcept { return den_; }
  double to_double() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  bool operator==(const Rational& o) const = default;
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_positive() const noexcept { return num_ > 0; }

 private:
  long long num_ = 0;
  long long den_ = 1;
};

/// Occupation numbers of the two oscillator axes.
struct LatticePoint {
  long long nx = 0;
  long long ny = 0;
  bool operator==(const LatticePoint&) const = default;
};

enum class Axis : int { X = 0, Y = 1 };

/// One resonant pulse: changes the axis occupation by delta_quanta; its
/// frequency is |delta_quanta| times the axis frequency.
struct PulseStep {
  Axis axis = Axis::X;
  long long delta_quanta = 0;
  Rational frequency;
};

struct PulsePlan {
  std::vector<PulseStep> steps;
};

/// Symmetric 2x2 stiffness matrix of the coupled oscillator (unit mass).
class StiffnessMatrix {
 public:
  StiffnessMatrix(double k11, double k12, double k22);

  double k11() const noexcept { return k11_; }
  double k12() const noexcept { return k12_; }
  double k22() const noexcept { return k22_; }
  bool is_positive_definite() const;

 private:
  double k11_, k12_, k22_;
};

/// Normal-mode frequencies: square roots of the stiffness eigenvalues,
/// sorted descending.
std::pair<double, double> frequencies_from_K(const StiffnessMatrix& k);

/// E = (n_x + 1/2) w_x + (n_y + 1/2) w_y, the half terms dropped when the
/// zero point is omitted.
Rational energy_of(LatticePoint p, const Rational& wx, const Rational& wy,
                   bool include_zero_point = false);

/// All lattice points inside [0, n_max]^2 with exactly the requested
/// energy, sorted by n_x.
std::vector<LatticePoint> level_set_points(const Rational& energy,
                                           const Rational& wx,
                                           const Rational& wy, long long n_max,
                                           bool include_zero_point = false);

std::size_t degeneracy(const Rational& energy, const Rational& wx,
                       const Rational& wy, long long n_max,
                       bool include_zero_point = false);

/// Pulse plans from a lattice point to the nearest point (fewest total
/// quanta moved, ties to the smaller n_x) of the target-energy level set:
/// the y-then-x and x-then-y orderings, collapsing to a single one-step
/// plan when only one axis changes, or to one empty plan when the start
/// already has the target energy.
std::vector<PulsePlan> plan_transition(LatticePoint from,
                                       const Rational& target_energy,
                                       const Rational& wx, const Rational& wy,
                                       bool include_zero_point = false,
                                       long long n_max = 50);

/// Applies one pulse step; occupations must stay non-negative.
LatticePoint apply_pulse(LatticePoint p, const PulseStep& step);

}  // namespace qls

#endif
