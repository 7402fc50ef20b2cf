#include "qls/state_space.hpp"

#include <cmath>
#include <numeric>

namespace qls {

namespace {

double sum_of_squares(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "spectrum needs at least two eigenvalues");
  }
  for (double e : values_) {
    if (!std::isfinite(e)) {
      throw Error(ErrorCode::InvalidArgument,
                  "spectrum eigenvalues must be finite");
    }
  }
  const double last = values_.back();
  for (double e : values_) {
    if (e < last) {
      throw Error(ErrorCode::InvalidArgument,
                  "minimum eigenvalue must be stored last");
    }
  }
}

void Spectrum::require_three_level() const {
  if (values_.size() != 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "contour construction needs a three-level spectrum");
  }
  if (!(values_[0] > values_[2]) || !(values_[1] > values_[2])) {
    throw Error(ErrorCode::InvalidArgument,
                "E_1 and E_2 must lie strictly above the minimum E_3");
  }
}

StateVec::StateVec(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "state vector needs at least two coefficients");
  }
  const double s = sum_of_squares(coeffs_);
  if (std::abs(s - 1.0) > kNormConstructionTol) {
    throw Error(ErrorCode::NotNormalized,
                "state coefficients are not unit norm");
  }
}

double StateVec::norm() const { return std::sqrt(sum_of_squares(coeffs_)); }

double StateVec::dot(const StateVec& other) const {
  if (other.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimensions differ");
  }
  return std::inner_product(coeffs_.begin(), coeffs_.end(),
                            other.coeffs_.begin(), 0.0);
}

ObservableMatrix::ObservableMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 2 || entries_.size() != n_ * n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "observable matrix entries do not match its dimension");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (entries_[i * n_ + j] != entries_[j * n_ + i]) {
        throw Error(ErrorCode::AsymmetricMatrix,
                    "observable matrix must be symmetric");
      }
    }
  }
}

ObservableMatrix ObservableMatrix::diagonal(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = spectrum[i];
  return ObservableMatrix(n, std::move(m));
}

ObservableMatrix ObservableMatrix::identity(std::size_t n) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return ObservableMatrix(n, std::move(m));
}

StateVec normalize(const std::vector<double>& raw) {
  if (raw.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least two coefficients to normalize");
  }
  const double n = std::sqrt(sum_of_squares(raw));
  if (!(n > 1e-300)) {
    throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  }
  std::vector<double> scaled(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) scaled[i] = raw[i] / n;
  return StateVec(std::move(scaled));
}

namespace {

void require_operating_norm(const StateVec& state) {
  if (std::abs(state.norm() - 1.0) > kNormOperationTol) {
    throw Error(ErrorCode::NotNormalized, "state norm drifted beyond 1e-9");
  }
}

}  // namespace

double expectation_energy(const StateVec& state, const Spectrum& spectrum) {
  if (state.size() != spectrum.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "state and spectrum dimensions differ");
  }
  require_operating_norm(state);
  double e = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    e += state[i] * state[i] * spectrum[i];
  }
  return e;
}

double expectation_observable(const StateVec& state,
                              const ObservableMatrix& obs) {
  if (state.size() != obs.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "state and observable dimensions differ");
  }
  require_operating_norm(state);
  double v = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < state.size(); ++j) {
      row += obs(i, j) * state[j];
    }
    v += state[i] * row;
  }
  return v;
}

}  // namespace qls
