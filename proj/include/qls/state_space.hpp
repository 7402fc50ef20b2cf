#ifndef QLS_STATE_SPACE_HPP
#define QLS_STATE_SPACE_HPP

#include <cstddef>
#include <vector>

#include "qls/errors.hpp"

namespace qls {

inline constexpr double kNormConstructionTol = 1e-12;
inline constexpr double kNormOperationTol = 1e-9;

/// Ordered list of real eigenvalues of the controlled observable.
/// By convention the last entry is the minimum eigenvalue (the ground
/// level); the three-level contour construction requires the first two
/// entries to lie strictly above it.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Minimum eigenvalue (stored last).
  double minimum() const noexcept { return values_.back(); }

  /// Throws unless this is a valid three-level layout with the first two
  /// eigenvalues strictly above the minimum.
  void require_three_level() const;

 private:
  std::vector<double> values_;
};

/// Unit-norm real coefficient vector over an energy eigenbasis.
class StateVec {
 public:
  /// Accepts coefficients that are already unit norm within 1e-12.
  explicit StateVec(std::vector<double> coeffs);

  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double norm() const;
  double dot(const StateVec& other) const;

 private:
  std::vector<double> coeffs_;
};

/// Real symmetric matrix of a secondary observable in the energy basis.
class ObservableMatrix {
 public:
  /// Row-major entries; must be symmetric exactly as stored.
  ObservableMatrix(std::size_t n, std::vector<double> entries);

  static ObservableMatrix diagonal(const Spectrum& spectrum);
  static ObservableMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Scales a raw coefficient list to unit norm. Throws on (near-)zero input.
StateVec normalize(const std::vector<double>& raw);

/// <E> = sum_i a_i^2 E_i.
double expectation_energy(const StateVec& state, const Spectrum& spectrum);

/// <theta> = a^T Theta a. Reduces to expectation_energy for a diagonal
/// matrix holding the spectrum.
double expectation_observable(const StateVec& state,
                              const ObservableMatrix& obs);

}  // namespace qls

#endif
