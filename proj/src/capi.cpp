#include "qls/qls.h"

#include <cstring>
#include <string>
#include <vector>

#include "qls/contour_geometry.hpp"
#include "qls/errors.hpp"
#include "qls/geometry.hpp"
#include "qls/lsm_engine.hpp"
#include "qls/oscillator_lattice.hpp"
#include "qls/state_space.hpp"
#include "qls/unitary_control.hpp"

struct qls_conic {
  qls::ConicLevelSet conic;
};

struct qls_polylines {
  std::vector<qls::Polyline> lines;
};

struct qls_field {
  qls::ScalarGridField field;
};

namespace {

thread_local std::string g_last_error;

qls_status fail(qls_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
qls_status guarded(F&& f) {
  try {
    return f();
  } catch (const qls::Error& e) {
    g_last_error = e.what();
    return static_cast<qls_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QLS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QLS_ERR_INTERNAL;
  }
}

bool all_present() { return true; }

template <typename T, typename... Rest>
bool all_present(const T* p, Rest... rest) {
  return p != nullptr && all_present(rest...);
}

#define QLS_REQUIRE(...)                                         \
  do {                                                           \
    if (!all_present(__VA_ARGS__)) {                             \
      return fail(QLS_ERR_NULL_POINTER, "null pointer argument"); \
    }                                                            \
  } while (0)

qls::StateVec to_state(const double* p, std::size_t n) {
  return qls::StateVec(std::vector<double>(p, p + n));
}

qls::Rational to_rational(qls_rational r) { return qls::Rational(r.num, r.den); }

qls_rational from_rational(const qls::Rational& r) {
  return qls_rational{r.num(), r.den()};
}

}  // namespace

extern "C" {

const char* qls_strerror(int status) {
  switch (status) {
    case QLS_OK: return "ok";
    case QLS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QLS_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case QLS_ERR_NOT_NORMALIZED: return "state not normalized";
    case QLS_ERR_ZERO_VECTOR: return "zero vector";
    case QLS_ERR_ASYMMETRIC_MATRIX: return "matrix not symmetric";
    case QLS_ERR_DEGENERATE_CONTOUR: return "degenerate contour";
    case QLS_ERR_TARGET_UNATTAINABLE: return "target unattainable";
    case QLS_ERR_CHART_EXIT: return "point leaves the unit-sphere chart";
    case QLS_ERR_IDENTICAL_CONICS: return "conics are identical";
    case QLS_ERR_DOMAIN_TOO_SMALL: return "grid domain too small";
    case QLS_ERR_NO_INTERFACE: return "field has no zero crossing";
    case QLS_ERR_BAD_SPEED: return "invalid speed";
    case QLS_ERR_BAD_TIME: return "invalid time";
    case QLS_ERR_NOT_POSITIVE_DEFINITE: return "matrix not positive definite";
    case QLS_ERR_NEGATIVE_OCCUPATION: return "occupation below zero";
    case QLS_ERR_UNREACHABLE_TARGET: return "target unreachable";
    case QLS_ERR_OFF_CONTOUR: return "point off its contour";
    case QLS_ERR_NULL_POINTER: return "null pointer argument";
    case QLS_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case QLS_ERR_INTERNAL: return "internal failure";
    default: return "unknown status";
  }
}

const char* qls_last_error_message(void) { return g_last_error.c_str(); }

/* ---------------- states ---------------- */

qls_status qls_normalize(const double* raw, size_t n, double* out) {
  QLS_REQUIRE(raw, out);
  return guarded([&] {
    const qls::StateVec s = qls::normalize(std::vector<double>(raw, raw + n));
    std::memcpy(out, s.coeffs().data(), n * sizeof(double));
    return QLS_OK;
  });
}

qls_status qls_expectation_energy(const double* state, const double* spectrum,
                                  size_t n, double* out) {
  QLS_REQUIRE(state, spectrum, out);
  return guarded([&] {
    const qls::Spectrum spec(std::vector<double>(spectrum, spectrum + n));
    *out = qls::expectation_energy(to_state(state, n), spec);
    return QLS_OK;
  });
}

qls_status qls_expectation_observable(const double* state, const double* obs,
                                      size_t n, double* out) {
  QLS_REQUIRE(state, obs, out);
  return guarded([&] {
    const qls::ObservableMatrix m(n, std::vector<double>(obs, obs + n * n));
    *out = qls::expectation_observable(to_state(state, n), m);
    return QLS_OK;
  });
}

/* ---------------- conics ---------------- */

qls_status qls_energy_contour(const double spectrum[3], double target,
                              qls_conic** out) {
  QLS_REQUIRE(spectrum, out);
  return guarded([&] {
    const qls::Spectrum spec({spectrum[0], spectrum[1], spectrum[2]});
    *out = new qls_conic{qls::energy_contour(spec, target)};
    return QLS_OK;
  });
}

qls_status qls_conic_from_quad(double q11, double q12, double q22,
                               qls_conic** out) {
  QLS_REQUIRE(out);
  return guarded([&] {
    *out = new qls_conic{qls::ConicLevelSet::from_quad(q11, q12, q22)};
    return QLS_OK;
  });
}

void qls_conic_destroy(qls_conic* conic) { delete conic; }

qls_status qls_conic_coeffs(const qls_conic* conic, double* q11, double* q12,
                            double* q22) {
  QLS_REQUIRE(conic, q11, q12, q22);
  *q11 = conic->conic.q11();
  *q12 = conic->conic.q12();
  *q22 = conic->conic.q22();
  return QLS_OK;
}

qls_status qls_conic_axes(const qls_conic* conic, double* semi_a,
                          double* semi_b, double* angle) {
  QLS_REQUIRE(conic, semi_a, semi_b, angle);
  return guarded([&] {
    conic->conic.principal_axes(*semi_a, *semi_b, *angle);
    return QLS_OK;
  });
}

qls_status qls_conic_residual(const qls_conic* conic, double x, double y,
                              double* out) {
  QLS_REQUIRE(conic, out);
  *out = conic->conic.residual({x, y});
  return QLS_OK;
}

qls_status qls_conic_point_at(const qls_conic* conic, double theta,
                              double out[3]) {
  QLS_REQUIRE(conic, out);
  return guarded([&] {
    const qls::ContourPoint p = qls::contour_point_at(conic->conic, theta);
    out[0] = p.a1();
    out[1] = p.a2();
    out[2] = p.a3();
    return QLS_OK;
  });
}

qls_status qls_sample_contour(const qls_conic* conic, size_t count,
                              double* thetas, double* points, size_t* kept,
                              size_t* dropped) {
  QLS_REQUIRE(conic, kept, dropped);
  return guarded([&] {
    const qls::ContourSamples s = qls::sample_contour(conic->conic, count);
    *kept = s.points.size();
    *dropped = s.dropped;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      if (thetas != nullptr) thetas[k] = s.theta[k];
      if (points != nullptr) {
        points[3 * k] = s.points[k].a1();
        points[3 * k + 1] = s.points[k].a2();
        points[3 * k + 2] = s.points[k].a3();
      }
    }
    return QLS_OK;
  });
}

qls_status qls_signed_distance(const qls_conic* conic, double x, double y,
                               double* out) {
  QLS_REQUIRE(conic, out);
  return guarded([&] {
    *out = qls::signed_distance_to_contour(conic->conic, {x, y});
    return QLS_OK;
  });
}

qls_status qls_perturb_contour(const qls_conic* conic, const double* points,
                               size_t m, double d_target, double* moved,
                               qls_conic** stepped) {
  QLS_REQUIRE(conic, points, moved, stepped);
  return guarded([&] {
    std::vector<qls::ContourPoint> pts;
    pts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      pts.emplace_back(points[2 * k], points[2 * k + 1]);
    }
    qls::PerturbedContour result =
        qls::perturb_contour(conic->conic, pts, d_target);
    for (std::size_t k = 0; k < m; ++k) {
      moved[2 * k] = result.points[k].x;
      moved[2 * k + 1] = result.points[k].y;
    }
    *stepped = new qls_conic{std::move(result.conic)};
    return QLS_OK;
  });
}

qls_status qls_intersect_conics(const qls_conic* a, const qls_conic* b,
                                double out_points[8], size_t* count) {
  QLS_REQUIRE(a, b, out_points, count);
  return guarded([&] {
    const std::vector<qls::PlanePoint> pts =
        qls::intersect_conics(a->conic, b->conic);
    *count = pts.size();
    for (std::size_t k = 0; k < pts.size() && k < 4; ++k) {
      out_points[2 * k] = pts[k].x;
      out_points[2 * k + 1] = pts[k].y;
    }
    return QLS_OK;
  });
}

/* ---------------- polylines ---------------- */

void qls_polylines_destroy(qls_polylines* lines) { delete lines; }

qls_status qls_polylines_count(const qls_polylines* lines, size_t* count) {
  QLS_REQUIRE(lines, count);
  *count = lines->lines.size();
  return QLS_OK;
}

qls_status qls_polylines_info(const qls_polylines* lines, size_t index,
                              size_t* point_count, int* closed) {
  QLS_REQUIRE(lines, point_count, closed);
  if (index >= lines->lines.size()) {
    return fail(QLS_ERR_INVALID_ARGUMENT, "polyline index out of range");
  }
  *point_count = lines->lines[index].points.size();
  *closed = lines->lines[index].closed ? 1 : 0;
  return QLS_OK;
}

qls_status qls_polylines_points(const qls_polylines* lines, size_t index,
                                double* xy) {
  QLS_REQUIRE(lines, xy);
  if (index >= lines->lines.size()) {
    return fail(QLS_ERR_INVALID_ARGUMENT, "polyline index out of range");
  }
  const auto& pts = lines->lines[index].points;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    xy[2 * k] = pts[k].x;
    xy[2 * k + 1] = pts[k].y;
  }
  return QLS_OK;
}

qls_status qls_theta_contour(const double obs[9], double target,
                             size_t resolution, qls_polylines** out,
                             int* degenerate) {
  QLS_REQUIRE(obs, out, degenerate);
  return guarded([&] {
    const qls::ObservableMatrix m(3, std::vector<double>(obs, obs + 9));
    qls::ThetaContours contours = qls::theta_contour(m, target, resolution);
    *degenerate = contours.degenerate_field ? 1 : 0;
    *out = new qls_polylines{std::move(contours.lines)};
    return QLS_OK;
  });
}

/* ---------------- fields ---------------- */

void qls_field_destroy(qls_field* field) { delete field; }

qls_status qls_field_from_circle(double cx, double cy, double radius,
                                 size_t nx, size_t ny, double h, double ox,
                                 double oy, qls_field** out) {
  QLS_REQUIRE(out);
  return guarded([&] {
    const qls::Polyline circle = qls::circle_polyline({cx, cy}, radius);
    const qls::GridSpec spec{nx, ny, h, {ox, oy}};
    *out = new qls_field{qls::init_from_polyline(circle, spec)};
    return QLS_OK;
  });
}

qls_status qls_field_from_conic(const qls_conic* conic, size_t nx, size_t ny,
                                double h, double ox, double oy,
                                qls_field** out) {
  QLS_REQUIRE(conic, out);
  return guarded([&] {
    const qls::GridSpec spec{nx, ny, h, {ox, oy}};
    *out = new qls_field{qls::init_from_contour(conic->conic, spec)};
    return QLS_OK;
  });
}

qls_status qls_field_from_values(size_t nx, size_t ny, double h, double ox,
                                 double oy, const double* values,
                                 qls_field** out) {
  QLS_REQUIRE(values, out);
  return guarded([&] {
    const qls::GridSpec spec{nx, ny, h, {ox, oy}};
    *out = new qls_field{qls::ScalarGridField(
        spec, std::vector<double>(values, values + nx * ny))};
    return QLS_OK;
  });
}

qls_status qls_field_dims(const qls_field* field, size_t* nx, size_t* ny,
                          double* h, double* ox, double* oy) {
  QLS_REQUIRE(field, nx, ny, h, ox, oy);
  *nx = field->field.nx();
  *ny = field->field.ny();
  *h = field->field.h();
  *ox = field->field.spec().origin.x;
  *oy = field->field.spec().origin.y;
  return QLS_OK;
}

qls_status qls_field_values(const qls_field* field, double* out) {
  QLS_REQUIRE(field, out);
  std::memcpy(out, field->field.values().data(),
              field->field.values().size() * sizeof(double));
  return QLS_OK;
}

qls_status qls_field_evolve(const qls_field* field, double speed, double t,
                            qls_field** out) {
  QLS_REQUIRE(field, out);
  return guarded([&] {
    *out = new qls_field{
        qls::evolve(field->field, qls::SpeedField::constant(speed), t)};
    return QLS_OK;
  });
}

qls_status qls_field_evolve_varying(const qls_field* field,
                                    const double* speeds, double t,
                                    qls_field** out) {
  QLS_REQUIRE(field, speeds, out);
  return guarded([&] {
    const std::size_t count = field->field.nx() * field->field.ny();
    *out = new qls_field{qls::evolve(
        field->field,
        qls::SpeedField::per_node(field->field.nx(), field->field.ny(),
                                  std::vector<double>(speeds, speeds + count)),
        t)};
    return QLS_OK;
  });
}

qls_status qls_field_reinitialize(const qls_field* field, qls_field** out) {
  QLS_REQUIRE(field, out);
  return guarded([&] {
    *out = new qls_field{qls::reinitialize(field->field)};
    return QLS_OK;
  });
}

qls_status qls_field_classify(const qls_field* field, unsigned char* labels) {
  QLS_REQUIRE(field, labels);
  return guarded([&] {
    const qls::GridPartition part = qls::classify_grid(field->field);
    for (std::size_t k = 0; k < part.labels.size(); ++k) {
      labels[k] = static_cast<unsigned char>(part.labels[k]);
    }
    return QLS_OK;
  });
}

qls_status qls_field_extract(const qls_field* field, qls_polylines** out) {
  QLS_REQUIRE(field, out);
  return guarded([&] {
    *out = new qls_polylines{qls::extract_interface(field->field)};
    return QLS_OK;
  });
}

qls_status qls_field_csv(const qls_field* field, char* buf, size_t cap,
                         size_t* needed) {
  QLS_REQUIRE(field, needed);
  return guarded([&] {
    const std::string csv = qls::field_to_csv(field->field);
    *needed = csv.size() + 1;
    if (buf == nullptr) return QLS_OK;
    if (cap < csv.size() + 1) {
      return fail(QLS_ERR_BUFFER_TOO_SMALL, "csv buffer too small");
    }
    std::memcpy(buf, csv.c_str(), csv.size() + 1);
    return QLS_OK;
  });
}

/* ---------------- orthogonal maps ---------------- */

qls_status qls_rotation_between(const double* p, const double* q, size_t n,
                                double* mat) {
  QLS_REQUIRE(p, q, mat);
  return guarded([&] {
    const qls::OrthogonalMap u =
        qls::rotation_between(to_state(p, n), to_state(q, n));
    std::memcpy(mat, u.entries().data(), n * n * sizeof(double));
    return QLS_OK;
  });
}

qls_status qls_transfer_anchor(const qls_conic* source, const double p_o[3],
                               const qls_conic* target, const double q_o[3],
                               double mat[9]) {
  QLS_REQUIRE(source, p_o, target, q_o, mat);
  return guarded([&] {
    const qls::OrthogonalMap u =
        qls::transfer_anchor(source->conic, to_state(p_o, 3), target->conic,
                             to_state(q_o, 3));
    std::memcpy(mat, u.entries().data(), 9 * sizeof(double));
    return QLS_OK;
  });
}

qls_status qls_three_step(const qls_conic* source, const double* points,
                          size_t m, const double p_o[3],
                          const qls_conic* target, const double q_o[3],
                          const double* assigned, double* waypoints,
                          double* maps) {
  QLS_REQUIRE(source, points, p_o, target, q_o, assigned);
  return guarded([&] {
    std::vector<qls::StateVec> sources;
    std::vector<qls::StateVec> targets;
    sources.reserve(m);
    targets.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      sources.push_back(to_state(points + 3 * k, 3));
      targets.push_back(to_state(assigned + 3 * k, 3));
    }
    const std::vector<qls::Trajectory> trajectories = qls::three_step_protocol(
        source->conic, sources, to_state(p_o, 3), target->conic,
        to_state(q_o, 3), targets);
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
      const qls::Trajectory& t = trajectories[k];
      if (waypoints != nullptr) {
        for (std::size_t w = 0; w < 4; ++w) {
          for (std::size_t c = 0; c < 3; ++c) {
            waypoints[12 * k + 3 * w + c] = t.waypoints[w][c];
          }
        }
      }
      if (maps != nullptr) {
        for (std::size_t hop = 0; hop < 3; ++hop) {
          std::memcpy(maps + 27 * k + 9 * hop, t.maps[hop].entries().data(),
                      9 * sizeof(double));
        }
      }
    }
    return QLS_OK;
  });
}

qls_status qls_direct_map(const qls_conic* source, const double p[3],
                          const qls_conic* destination, double q_out[3],
                          double mat[9], double* theta_out) {
  QLS_REQUIRE(source, p, destination, q_out, mat);
  try {
    const qls::DirectMapResult r =
        qls::direct_map(source->conic, to_state(p, 3), destination->conic);
    for (std::size_t c = 0; c < 3; ++c) q_out[c] = r.destination[c];
    std::memcpy(mat, r.map.entries().data(), 9 * sizeof(double));
    return QLS_OK;
  } catch (const qls::ChartExitError& e) {
    if (theta_out != nullptr) *theta_out = e.theta();
    g_last_error = e.what();
    return QLS_ERR_CHART_EXIT;
  } catch (const qls::Error& e) {
    g_last_error = e.what();
    return static_cast<qls_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QLS_ERR_INTERNAL;
  }
}

qls_status qls_witness(const double* points, size_t m, size_t n,
                       const double* anchor, size_t* i, size_t* j,
                       double* inner, int* found) {
  QLS_REQUIRE(points, anchor, i, j, inner, found);
  return guarded([&] {
    std::vector<qls::StateVec> pts;
    pts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      pts.push_back(to_state(points + n * k, n));
    }
    const auto witness =
        qls::no_universal_unitary_witness(pts, to_state(anchor, n));
    if (witness) {
      *i = witness->i;
      *j = witness->j;
      *inner = witness->inner;
      *found = 1;
    } else {
      *found = 0;
    }
    return QLS_OK;
  });
}

/* ---------------- oscillator lattice ---------------- */

qls_status qls_oscillator_frequencies(double k11, double k12, double k22,
                                      double* w_hi, double* w_lo) {
  QLS_REQUIRE(w_hi, w_lo);
  return guarded([&] {
    const auto [hi, lo] =
        qls::frequencies_from_K(qls::StiffnessMatrix(k11, k12, k22));
    *w_hi = hi;
    *w_lo = lo;
    return QLS_OK;
  });
}

qls_status qls_oscillator_energy(long long nx, long long ny, qls_rational wx,
                                 qls_rational wy, int include_zero_point,
                                 qls_rational* out) {
  QLS_REQUIRE(out);
  return guarded([&] {
    *out = from_rational(qls::energy_of({nx, ny}, to_rational(wx),
                                        to_rational(wy),
                                        include_zero_point != 0));
    return QLS_OK;
  });
}

qls_status qls_oscillator_level_set(qls_rational energy, qls_rational wx,
                                    qls_rational wy, long long n_max,
                                    int include_zero_point, long long* points,
                                    size_t cap, size_t* count) {
  QLS_REQUIRE(count);
  return guarded([&] {
    const std::vector<qls::LatticePoint> pts = qls::level_set_points(
        to_rational(energy), to_rational(wx), to_rational(wy), n_max,
        include_zero_point != 0);
    *count = pts.size();
    if (points == nullptr) return QLS_OK;
    if (cap < pts.size()) {
      return fail(QLS_ERR_BUFFER_TOO_SMALL, "lattice point buffer too small");
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      points[2 * k] = pts[k].nx;
      points[2 * k + 1] = pts[k].ny;
    }
    return QLS_OK;
  });
}

qls_status qls_oscillator_plan(long long fx, long long fy,
                               qls_rational target_energy, qls_rational wx,
                               qls_rational wy, int include_zero_point,
                               long long n_max, qls_pulse_step steps[4],
                               size_t lens[2], size_t* plan_count) {
  QLS_REQUIRE(steps, lens, plan_count);
  return guarded([&] {
    const std::vector<qls::PulsePlan> plans = qls::plan_transition(
        {fx, fy}, to_rational(target_energy), to_rational(wx),
        to_rational(wy), include_zero_point != 0, n_max);
    *plan_count = plans.size();
    lens[0] = lens[1] = 0;
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < plans.size(); ++k) {
      lens[k] = plans[k].steps.size();
      for (const qls::PulseStep& s : plans[k].steps) {
        steps[cursor++] = qls_pulse_step{static_cast<int>(s.axis),
                                         s.delta_quanta,
                                         from_rational(s.frequency)};
      }
    }
    return QLS_OK;
  });
}

qls_status qls_oscillator_apply(long long nx, long long ny,
                                const qls_pulse_step* step, long long* out_nx,
                                long long* out_ny) {
  QLS_REQUIRE(step, out_nx, out_ny);
  return guarded([&] {
    const qls::PulseStep s{step->axis == 0 ? qls::Axis::X : qls::Axis::Y,
                           step->delta_quanta,
                           to_rational(step->frequency)};
    const qls::LatticePoint p = qls::apply_pulse({nx, ny}, s);
    *out_nx = p.nx;
    *out_ny = p.ny;
    return QLS_OK;
  });
}

}  // extern "C"
