// Exercises the shared-library C interface exactly as an external consumer
// would: only qls/qls.h, opaque handles, status codes, and raw buffers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "qls/qls.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

void mat3_apply(const double* m, const double* v, double* out) {
  for (int r = 0; r < 3; ++r) {
    out[r] = m[3 * r] * v[0] + m[3 * r + 1] * v[1] + m[3 * r + 2] * v[2];
  }
}

double dist3(const double* a, const double* b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// RAII wrappers keep the error-path tests leak-free.
struct Conic {
  qls_conic* h = nullptr;
  ~Conic() { qls_conic_destroy(h); }
};

struct Field {
  qls_field* h = nullptr;
  ~Field() { qls_field_destroy(h); }
};

struct Polylines {
  qls_polylines* h = nullptr;
  ~Polylines() { qls_polylines_destroy(h); }
};

}  // namespace

TEST_CASE("status names and failure messages") {
  CHECK(std::strlen(qls_strerror(QLS_OK)) > 0);
  CHECK(std::strlen(qls_strerror(QLS_ERR_CHART_EXIT)) > 0);
  CHECK(std::strlen(qls_strerror(QLS_ERR_NULL_POINTER)) > 0);
  CHECK(qls_strerror(123456) != nullptr);

  double out[3];
  const double zero[3] = {0.0, 0.0, 0.0};
  CHECK(qls_normalize(zero, 3, out) == QLS_ERR_ZERO_VECTOR);
  CHECK(std::strlen(qls_last_error_message()) > 0);
}

TEST_CASE("state normalization and expectation values") {
  const double raw[3] = {3.0, 4.0, 0.0};
  double unit[3];
  REQUIRE(qls_normalize(raw, 3, unit) == QLS_OK);
  CHECK(unit[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(unit[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(unit[2] == 0.0);

  const double spectrum[3] = {3.0, 2.0, 1.0};
  double energy = 0.0;
  REQUIRE(qls_expectation_energy(unit, spectrum, 3, &energy) == QLS_OK);
  CHECK(energy == doctest::Approx(0.36 * 3.0 + 0.64 * 2.0).epsilon(1e-15));

  // Same diagonal observable as a full matrix.
  const double diag[9] = {3, 0, 0, 0, 2, 0, 0, 0, 1};
  double value = 0.0;
  REQUIRE(qls_expectation_observable(unit, diag, 3, &value) == QLS_OK);
  CHECK(value == doctest::Approx(energy).epsilon(1e-15));

  const double skew[9] = {3, 1, 0, 0, 2, 0, 0, 0, 1};
  CHECK(qls_expectation_observable(unit, skew, 3, &value) ==
        QLS_ERR_ASYMMETRIC_MATRIX);

  const double not_unit[3] = {1.0, 1.0, 0.0};
  CHECK(qls_expectation_energy(not_unit, spectrum, 3, &energy) ==
        QLS_ERR_NOT_NORMALIZED);
}

TEST_CASE("energy contour construction and coefficient access") {
  const double spectrum[3] = {2.0, 2.0, 1.0};
  Conic c;
  REQUIRE(qls_energy_contour(spectrum, 1.25, &c.h) == QLS_OK);

  double q11 = 0, q12 = 0, q22 = 0;
  REQUIRE(qls_conic_coeffs(c.h, &q11, &q12, &q22) == QLS_OK);
  CHECK(q11 == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(q12 == 0.0);
  CHECK(q22 == doctest::Approx(4.0).epsilon(1e-15));

  double a = 0, b = 0, ang = 0;
  REQUIRE(qls_conic_axes(c.h, &a, &b, &ang) == QLS_OK);
  CHECK(a == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ang == 0.0);

  // Targets at or below the minimum leave no closed curve; above the
  // maximum nothing in the chart reaches it.
  Conic bad;
  CHECK(qls_energy_contour(spectrum, 1.0, &bad.h) ==
        QLS_ERR_DEGENERATE_CONTOUR);
  CHECK(qls_energy_contour(spectrum, 2.5, &bad.h) ==
        QLS_ERR_TARGET_UNATTAINABLE);
}

TEST_CASE("conic points, residuals, and chart exits") {
  Conic c;
  REQUIRE(qls_conic_from_quad(4.0, 0.0, 4.0, &c.h) == QLS_OK);

  double p[3];
  REQUIRE(qls_conic_point_at(c.h, 0.0, p) == QLS_OK);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(p[1]) < 1e-15);
  CHECK(p[2] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));

  double r = 1.0;
  REQUIRE(qls_conic_residual(c.h, 0.5, 0.0, &r) == QLS_OK);
  CHECK(std::abs(r) < 1e-15);
  REQUIRE(qls_conic_residual(c.h, 0.0, 0.0, &r) == QLS_OK);
  CHECK(r == doctest::Approx(-1.0).epsilon(1e-15));

  // Radius-2 circle: every parameter leaves the unit disk.
  Conic wide;
  REQUIRE(qls_conic_from_quad(0.25, 0.0, 0.25, &wide.h) == QLS_OK);
  CHECK(qls_conic_point_at(wide.h, 0.0, p) == QLS_ERR_CHART_EXIT);

  Conic none;
  CHECK(qls_conic_from_quad(0.0, 0.0, 0.0, &none.h) ==
        QLS_ERR_DEGENERATE_CONTOUR);
}

TEST_CASE("contour sampling counts kept and dropped points") {
  Conic c;
  REQUIRE(qls_conic_from_quad(4.0, 0.0, 4.0, &c.h) == QLS_OK);

  const size_t count = 16;
  std::vector<double> thetas(count), points(3 * count);
  size_t kept = 0, dropped = 1;
  REQUIRE(qls_sample_contour(c.h, count, thetas.data(), points.data(), &kept,
                             &dropped) == QLS_OK);
  CHECK(kept == count);
  CHECK(dropped == 0);
  for (size_t k = 0; k < kept; ++k) {
    const double* s = &points[3 * k];
    CHECK(std::abs(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 1.0) < 1e-12);
  }
  // Parameters are uniform from zero.
  CHECK(std::abs(thetas[1] - thetas[0] - 2.0 * kPi / count) < 1e-12);

  // The theta buffer is optional.
  REQUIRE(qls_sample_contour(c.h, count, nullptr, points.data(), &kept,
                             &dropped) == QLS_OK);
  CHECK(kept == count);

  // An ellipse poking out of the disk drops the out-of-chart arc.
  Conic tall;
  REQUIRE(qls_conic_from_quad(4.0, 0.0, 0.25, &tall.h) == QLS_OK);
  points.resize(3 * 64);
  REQUIRE(qls_sample_contour(tall.h, 64, nullptr, points.data(), &kept,
                             &dropped) == QLS_OK);
  CHECK(kept > 0);
  CHECK(dropped > 0);
  CHECK(kept + dropped == 64);
}

TEST_CASE("signed distance to a contour") {
  Conic c;
  REQUIRE(qls_conic_from_quad(4.0, 0.0, 4.0, &c.h) == QLS_OK);
  // The contour is measured through a dense sample, so distances carry a
  // small discretization error.
  double d = 0.0;
  REQUIRE(qls_signed_distance(c.h, 0.0, 0.0, &d) == QLS_OK);
  CHECK(std::abs(d + 0.5) < 1e-5);
  REQUIRE(qls_signed_distance(c.h, 1.5, 0.0, &d) == QLS_OK);
  CHECK(std::abs(d - 1.0) < 1e-5);
}

TEST_CASE("first-order contour perturbation") {
  const double spectrum[3] = {2.0, 2.0, 1.0};
  Conic c;
  REQUIRE(qls_energy_contour(spectrum, 1.25, &c.h) == QLS_OK);

  const double pts[4] = {0.5, 0.0, 0.0, 0.5};
  double moved[4];
  Conic stepped;
  REQUIRE(qls_perturb_contour(c.h, pts, 2, 1e-4, moved, &stepped.h) == QLS_OK);

  // The stepped conic is the exact contour at the nudged target.
  Conic exact;
  REQUIRE(qls_energy_contour(spectrum, 1.25 + 1e-4, &exact.h) == QLS_OK);
  double a11, a12, a22, b11, b12, b22;
  REQUIRE(qls_conic_coeffs(stepped.h, &a11, &a12, &a22) == QLS_OK);
  REQUIRE(qls_conic_coeffs(exact.h, &b11, &b12, &b22) == QLS_OK);
  CHECK(a11 == doctest::Approx(b11).epsilon(1e-12));
  CHECK(a22 == doctest::Approx(b22).epsilon(1e-12));

  // Moved points sit on the stepped contour up to the quadratic remainder.
  for (int k = 0; k < 2; ++k) {
    double r = 0.0;
    REQUIRE(qls_conic_residual(stepped.h, moved[2 * k], moved[2 * k + 1],
                               &r) == QLS_OK);
    CHECK(std::abs(r) < 1e-6);
  }

  // Off-contour inputs are rejected.
  const double off[2] = {0.3, 0.0};
  Conic unused;
  CHECK(qls_perturb_contour(c.h, off, 1, 1e-4, moved, &unused.h) ==
        QLS_ERR_OFF_CONTOUR);
}

TEST_CASE("conic intersection points") {
  Conic a, b;
  REQUIRE(qls_conic_from_quad(1.0, 0.0, 1.0, &a.h) == QLS_OK);
  REQUIRE(qls_conic_from_quad(2.0, 0.0, 0.5, &b.h) == QLS_OK);

  double pts[8];
  size_t count = 0;
  REQUIRE(qls_intersect_conics(a.h, b.h, pts, &count) == QLS_OK);
  REQUIRE(count == 4);
  for (size_t k = 0; k < count; ++k) {
    CHECK(std::abs(pts[2 * k] * pts[2 * k] - 1.0 / 3.0) < 1e-9);
    CHECK(std::abs(pts[2 * k + 1] * pts[2 * k + 1] - 2.0 / 3.0) < 1e-9);
  }

  Conic a2;
  REQUIRE(qls_conic_from_quad(1.0, 0.0, 1.0, &a2.h) == QLS_OK);
  CHECK(qls_intersect_conics(a.h, a2.h, pts, &count) ==
        QLS_ERR_IDENTICAL_CONICS);
}

TEST_CASE("secondary-observable contours and polyline access") {
  // f = 2 a1 a3 over the disk; the 0.5 level is a closed ring.
  const double obs[9] = {0, 0, 1, 0, 0, 0, 1, 0, 0};
  Polylines lines;
  int degenerate = 1;
  REQUIRE(qls_theta_contour(obs, 0.5, 96, &lines.h, &degenerate) == QLS_OK);
  CHECK(degenerate == 0);

  size_t count = 0;
  REQUIRE(qls_polylines_count(lines.h, &count) == QLS_OK);
  REQUIRE(count >= 1);

  size_t n_pts = 0;
  int closed = 0;
  REQUIRE(qls_polylines_info(lines.h, 0, &n_pts, &closed) == QLS_OK);
  CHECK(closed == 1);
  REQUIRE(n_pts >= 8);

  std::vector<double> xy(2 * n_pts);
  REQUIRE(qls_polylines_points(lines.h, 0, xy.data()) == QLS_OK);
  for (size_t k = 0; k < n_pts; ++k) {
    const double x = xy[2 * k], y = xy[2 * k + 1];
    const double rsq = x * x + y * y;
    REQUIRE(rsq <= 1.0 + 1e-12);
    const double f = 2.0 * x * std::sqrt(std::max(0.0, 1.0 - rsq));
    CHECK(std::abs(f - 0.5) < 0.05);  // grid-resolution accuracy
  }

  CHECK(qls_polylines_info(lines.h, count, &n_pts, &closed) ==
        QLS_ERR_INVALID_ARGUMENT);

  // A constant observable matching the target has no isolated contour.
  const double identity[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  Polylines flat;
  degenerate = 0;
  REQUIRE(qls_theta_contour(identity, 1.0, 32, &flat.h, &degenerate) ==
          QLS_OK);
  CHECK(degenerate == 1);

  Polylines coarse;
  CHECK(qls_theta_contour(obs, 0.5, 8, &coarse.h, &degenerate) ==
        QLS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("grid field lifecycle on a shrinking circle") {
  Field f;
  REQUIRE(qls_field_from_circle(0.0, 0.0, 0.9, 101, 101, 0.04, -2.0, -2.0,
                                &f.h) == QLS_OK);

  size_t nx = 0, ny = 0;
  double h = 0, ox = 0, oy = 0;
  REQUIRE(qls_field_dims(f.h, &nx, &ny, &h, &ox, &oy) == QLS_OK);
  CHECK(nx == 101);
  CHECK(ny == 101);
  CHECK(h == 0.04);
  CHECK(ox == -2.0);
  CHECK(oy == -2.0);

  std::vector<double> values(nx * ny);
  REQUIRE(qls_field_values(f.h, values.data()) == QLS_OK);
  // Center node (50, 50) sits 0.9 inside the circle; the distance is taken
  // to a dense polygonal sample of it.
  CHECK(std::abs(values[50 * nx + 50] + 0.9) < 1e-3);

  // Inward speed for time 0.3 moves the zero level to radius 0.6.
  Field shrunk;
  REQUIRE(qls_field_evolve(f.h, -1.0, 0.3, &shrunk.h) == QLS_OK);
  Polylines lines;
  REQUIRE(qls_field_extract(shrunk.h, &lines.h) == QLS_OK);
  size_t count = 0;
  REQUIRE(qls_polylines_count(lines.h, &count) == QLS_OK);
  REQUIRE(count == 1);
  size_t n_pts = 0;
  int closed = 0;
  REQUIRE(qls_polylines_info(lines.h, 0, &n_pts, &closed) == QLS_OK);
  CHECK(closed == 1);
  std::vector<double> xy(2 * n_pts);
  REQUIRE(qls_polylines_points(lines.h, 0, xy.data()) == QLS_OK);
  for (size_t k = 0; k < n_pts; ++k) {
    const double r = std::hypot(xy[2 * k], xy[2 * k + 1]);
    CHECK(std::abs(r - 0.6) < 2.0 * h);
  }

  // Zero speed is a no-op.
  Field still;
  REQUIRE(qls_field_evolve(f.h, 0.0, 1.0, &still.h) == QLS_OK);
  std::vector<double> same(nx * ny);
  REQUIRE(qls_field_values(still.h, same.data()) == QLS_OK);
  CHECK(same == values);

  // Node-wise speeds follow the same entry point.
  std::vector<double> speeds(nx * ny, -1.0);
  Field varying;
  REQUIRE(qls_field_evolve_varying(f.h, speeds.data(), 0.3, &varying.h) ==
          QLS_OK);

  Field redist;
  REQUIRE(qls_field_reinitialize(shrunk.h, &redist.h) == QLS_OK);

  std::vector<unsigned char> labels(nx * ny);
  REQUIRE(qls_field_classify(f.h, labels.data()) == QLS_OK);
  CHECK(labels[50 * nx + 50] == 2);  // deep inside
  CHECK(labels[0] == 0);             // far corner
  size_t interface_nodes = 0;
  for (unsigned char l : labels) interface_nodes += l == 1 ? 1 : 0;
  CHECK(interface_nodes > 0);

  CHECK(qls_field_evolve(f.h, -1.0, -0.1, &still.h) == QLS_ERR_BAD_TIME);

  // A circle without a two-cell margin does not fit the domain.
  Field tight;
  CHECK(qls_field_from_circle(0.0, 0.0, 0.5, 13, 13, 0.1, -0.6, -0.6,
                              &tight.h) == QLS_ERR_DOMAIN_TOO_SMALL);
}

TEST_CASE("field construction from values and from a conic") {
  const double vals[9] = {-0.5, 0.125, 2.0, 0.25, -1.0, 1.0, 7.0, -1.25, 0.75};
  Field f;
  REQUIRE(qls_field_from_values(3, 3, 0.5, -1.0, 0.0, vals, &f.h) == QLS_OK);
  std::vector<double> out(9);
  REQUIRE(qls_field_values(f.h, out.data()) == QLS_OK);
  for (int k = 0; k < 9; ++k) CHECK(out[k] == vals[k]);

  Conic c;
  REQUIRE(qls_conic_from_quad(4.0, 0.0, 4.0, &c.h) == QLS_OK);
  Field g;
  REQUIRE(qls_field_from_conic(c.h, 101, 101, 0.04, -2.0, -2.0, &g.h) ==
          QLS_OK);
  std::vector<double> gv(101 * 101);
  REQUIRE(qls_field_values(g.h, gv.data()) == QLS_OK);
  // Center node is half a unit inside the radius-0.5 circle.
  CHECK(gv[50 * 101 + 50] == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("field CSV rendering uses the two-call size pattern") {
  const double vals[9] = {-0.5, 0.125, 2.0, 0.25, -1.0, 1.0, 7.0, -1.25, 0.75};
  Field f;
  REQUIRE(qls_field_from_values(3, 3, 0.5, -1.0, 0.0, vals, &f.h) == QLS_OK);

  size_t needed = 0;
  REQUIRE(qls_field_csv(f.h, nullptr, 0, &needed) == QLS_OK);
  REQUIRE(needed > 0);

  std::vector<char> buf(needed);
  CHECK(qls_field_csv(f.h, buf.data(), needed - 1, &needed) ==
        QLS_ERR_BUFFER_TOO_SMALL);
  REQUIRE(qls_field_csv(f.h, buf.data(), needed, &needed) == QLS_OK);
  CHECK(std::strlen(buf.data()) == needed - 1);

  const std::string text(buf.data());
  CHECK(text.rfind("nx,ny,h,origin_x,origin_y\n3,3,0.5,-1,0\n", 0) == 0);
  CHECK(text.find("7,-1.25,0.75\n") != std::string::npos);
}

TEST_CASE("rotation between unit vectors") {
  const double e1[3] = {1, 0, 0};
  const double e2[3] = {0, 1, 0};
  double mat[9];
  REQUIRE(qls_rotation_between(e1, e2, 3, mat) == QLS_OK);
  double img[3];
  mat3_apply(mat, e1, img);
  CHECK(dist3(img, e2) < 1e-14);

  REQUIRE(qls_rotation_between(e1, e1, 3, mat) == QLS_OK);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      CHECK(mat[3 * r + c] == (r == c ? 1.0 : 0.0));
    }
  }

  const double long_vec[3] = {1, 1, 0};
  CHECK(qls_rotation_between(long_vec, e2, 3, mat) == QLS_ERR_NOT_NORMALIZED);
}

TEST_CASE("anchor transfer between two contours") {
  const double spectrum[3] = {2.0, 2.0, 1.0};
  Conic src, dst;
  REQUIRE(qls_energy_contour(spectrum, 1.25, &src.h) == QLS_OK);
  REQUIRE(qls_energy_contour(spectrum, 1.5, &dst.h) == QLS_OK);

  const double p_o[3] = {0.5, 0.0, std::sqrt(0.75)};
  const double q_o[3] = {std::sqrt(0.5), 0.0, std::sqrt(0.5)};
  double mat[9];
  REQUIRE(qls_transfer_anchor(src.h, p_o, dst.h, q_o, mat) == QLS_OK);
  double img[3];
  mat3_apply(mat, p_o, img);
  CHECK(dist3(img, q_o) < 1e-12);

  const double off[3] = {0.0, 0.0, 1.0};
  CHECK(qls_transfer_anchor(src.h, off, dst.h, q_o, mat) ==
        QLS_ERR_OFF_CONTOUR);
}

TEST_CASE("three-step protocol waypoints and maps") {
  const double spectrum[3] = {2.0, 2.0, 1.0};
  Conic src, dst;
  REQUIRE(qls_energy_contour(spectrum, 1.25, &src.h) == QLS_OK);
  REQUIRE(qls_energy_contour(spectrum, 1.5, &dst.h) == QLS_OK);

  const double r3 = std::sqrt(0.75);
  const double r2 = std::sqrt(0.5);
  const double points[6] = {0.5, 0.0, r3, 0.0, 0.5, r3};
  const double p_o[3] = {0.5, 0.0, r3};
  const double q_o[3] = {r2, 0.0, r2};
  const double assigned[6] = {r2, 0.0, r2, 0.0, r2, r2};

  double waypoints[2 * 12];
  double maps[2 * 27];
  REQUIRE(qls_three_step(src.h, points, 2, p_o, dst.h, q_o, assigned,
                         waypoints, maps) == QLS_OK);

  for (int k = 0; k < 2; ++k) {
    const double* w = &waypoints[12 * k];
    CHECK(dist3(w, &points[3 * k]) < 1e-15);       // start
    CHECK(dist3(w + 3, p_o) < 1e-12);              // contracted to anchor
    CHECK(dist3(w + 6, q_o) < 1e-12);              // transferred
    CHECK(dist3(w + 9, &assigned[3 * k]) < 1e-12); // expanded to target

    // Replaying the three stored maps reproduces the waypoints.
    const double* m = &maps[27 * k];
    double a[3], b[3], c[3];
    mat3_apply(m, w, a);
    CHECK(dist3(a, w + 3) < 1e-12);
    mat3_apply(m + 9, a, b);
    CHECK(dist3(b, w + 6) < 1e-12);
    mat3_apply(m + 18, b, c);
    CHECK(dist3(c, w + 9) < 1e-12);
  }

  // Output buffers are optional; validation still runs.
  REQUIRE(qls_three_step(src.h, points, 2, p_o, dst.h, q_o, assigned, nullptr,
                         nullptr) == QLS_OK);
}

TEST_CASE("direct map and its chart-exit report") {
  const double spectrum[3] = {2.0, 2.0, 1.0};
  Conic src, dst;
  REQUIRE(qls_energy_contour(spectrum, 1.25, &src.h) == QLS_OK);
  REQUIRE(qls_energy_contour(spectrum, 1.5, &dst.h) == QLS_OK);

  const double p[3] = {0.5, 0.0, std::sqrt(0.75)};
  double q[3], mat[9], theta = -1.0;
  REQUIRE(qls_direct_map(src.h, p, dst.h, q, mat, &theta) == QLS_OK);
  const double expected[3] = {std::sqrt(0.5), 0.0, std::sqrt(0.5)};
  CHECK(dist3(q, expected) < 1e-12);
  double img[3];
  mat3_apply(mat, p, img);
  CHECK(dist3(img, q) < 1e-12);

  // Destination entirely outside the disk: the offending parameter comes
  // back through theta_out.
  Conic wide;
  REQUIRE(qls_conic_from_quad(0.25, 0.0, 0.25, &wide.h) == QLS_OK);
  theta = -1.0;
  CHECK(qls_direct_map(src.h, p, wide.h, q, mat, &theta) ==
        QLS_ERR_CHART_EXIT);
  CHECK(std::abs(theta) < 1e-12);
}

TEST_CASE("witness search for non-collapsible point sets") {
  const double r2 = std::sqrt(0.5);
  const double anchor[3] = {1.0, 0.0, 0.0};
  const double spread[9] = {1, 0, 0, 0, 1, 0, r2, r2, 0};
  size_t i = 99, j = 99;
  double inner = 0.0;
  int found = 0;
  REQUIRE(qls_witness(spread, 3, 3, anchor, &i, &j, &inner, &found) == QLS_OK);
  CHECK(found == 1);
  CHECK(i < j);
  CHECK(j < 3);
  CHECK(std::abs(inner - 1.0) > 1e-9);

  const double same[9] = {1, 0, 0, 1, 0, 0, 1, 0, 0};
  REQUIRE(qls_witness(same, 3, 3, anchor, &i, &j, &inner, &found) == QLS_OK);
  CHECK(found == 0);
}

TEST_CASE("oscillator frequencies, energies, and level sets") {
  double hi = 0, lo = 0;
  REQUIRE(qls_oscillator_frequencies(4.0, 0.0, 9.0, &hi, &lo) == QLS_OK);
  CHECK(hi == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lo == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(qls_oscillator_frequencies(1.0, 2.0, 1.0, &hi, &lo) ==
        QLS_ERR_NOT_POSITIVE_DEFINITE);

  const qls_rational one{1, 1};
  qls_rational e;
  REQUIRE(qls_oscillator_energy(4, 5, one, one, 0, &e) == QLS_OK);
  CHECK(e.num == 9);
  CHECK(e.den == 1);
  // Mixed denominators reduce: 3/2 + 1/3 = 11/6.
  REQUIRE(qls_oscillator_energy(3, 1, qls_rational{1, 2}, qls_rational{1, 3},
                                0, &e) == QLS_OK);
  CHECK(e.num == 11);
  CHECK(e.den == 6);

  // Count query, then exact-size fill, then a too-small buffer.
  size_t count = 0;
  REQUIRE(qls_oscillator_level_set(qls_rational{3, 1}, one, one, 10, 0,
                                   nullptr, 0, &count) == QLS_OK);
  REQUIRE(count == 4);
  std::vector<long long> pts(2 * count);
  REQUIRE(qls_oscillator_level_set(qls_rational{3, 1}, one, one, 10, 0,
                                   pts.data(), count, &count) == QLS_OK);
  const long long expected[8] = {0, 3, 1, 2, 2, 1, 3, 0};
  for (int k = 0; k < 8; ++k) CHECK(pts[k] == expected[k]);
  CHECK(qls_oscillator_level_set(qls_rational{3, 1}, one, one, 10, 0,
                                 pts.data(), 2, &count) ==
        QLS_ERR_BUFFER_TOO_SMALL);
  CHECK(count == 4);

  CHECK(qls_oscillator_energy(4, 5, qls_rational{1, 0}, one, 0, &e) ==
        QLS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("oscillator pulse plans round-trip through the C layout") {
  const qls_rational one{1, 1};
  qls_pulse_step steps[4];
  size_t lens[2] = {0, 0};
  size_t plan_count = 0;
  REQUIRE(qls_oscillator_plan(4, 5, qls_rational{1, 1}, one, one, 0, 50,
                              steps, lens, &plan_count) == QLS_OK);
  REQUIRE(plan_count == 2);
  REQUIRE(lens[0] == 2);
  REQUIRE(lens[1] == 2);
  CHECK(steps[0].axis == 1);
  CHECK(steps[0].delta_quanta == -4);
  CHECK(steps[0].frequency.num == 4);
  CHECK(steps[0].frequency.den == 1);
  CHECK(steps[1].axis == 0);
  CHECK(steps[2].axis == 0);
  CHECK(steps[3].axis == 1);

  // Replaying each plan lands on (0, 1).
  for (size_t plan = 0; plan < plan_count; ++plan) {
    long long nx = 4, ny = 5;
    for (size_t s = 0; s < lens[plan]; ++s) {
      REQUIRE(qls_oscillator_apply(nx, ny, &steps[2 * plan + s], &nx, &ny) ==
              QLS_OK);
    }
    CHECK(nx == 0);
    CHECK(ny == 1);
  }

  // Already on target: one plan of length zero.
  REQUIRE(qls_oscillator_plan(0, 1, qls_rational{1, 1}, one, one, 0, 50,
                              steps, lens, &plan_count) == QLS_OK);
  CHECK(plan_count == 1);
  CHECK(lens[0] == 0);

  CHECK(qls_oscillator_plan(0, 0, qls_rational{1, 7}, one, one, 0, 50, steps,
                            lens, &plan_count) == QLS_ERR_UNREACHABLE_TARGET);

  qls_pulse_step down{0, -2, {2, 1}};
  long long nx = 0, ny = 0;
  CHECK(qls_oscillator_apply(1, 0, &down, &nx, &ny) ==
        QLS_ERR_NEGATIVE_OCCUPATION);
}

TEST_CASE("null pointers are reported, and null destroys are no-ops") {
  double out3[3], mat[9], d = 0.0;
  size_t sz = 0;
  const double unit[3] = {1, 0, 0};
  const double spectrum[3] = {2.0, 2.0, 1.0};

  CHECK(qls_normalize(nullptr, 3, out3) == QLS_ERR_NULL_POINTER);
  CHECK(qls_normalize(unit, 3, nullptr) == QLS_ERR_NULL_POINTER);
  CHECK(qls_expectation_energy(unit, spectrum, 3, nullptr) ==
        QLS_ERR_NULL_POINTER);
  CHECK(qls_energy_contour(nullptr, 1.25, nullptr) == QLS_ERR_NULL_POINTER);
  CHECK(qls_conic_coeffs(nullptr, &d, &d, &d) == QLS_ERR_NULL_POINTER);
  CHECK(qls_conic_point_at(nullptr, 0.0, out3) == QLS_ERR_NULL_POINTER);
  CHECK(qls_polylines_count(nullptr, &sz) == QLS_ERR_NULL_POINTER);
  CHECK(qls_field_values(nullptr, &d) == QLS_ERR_NULL_POINTER);
  CHECK(qls_rotation_between(unit, unit, 3, nullptr) == QLS_ERR_NULL_POINTER);
  CHECK(qls_witness(nullptr, 2, 3, unit, &sz, &sz, &d, nullptr) ==
        QLS_ERR_NULL_POINTER);
  CHECK(qls_oscillator_energy(0, 0, {1, 1}, {1, 1}, 0, nullptr) ==
        QLS_ERR_NULL_POINTER);
  CHECK(qls_direct_map(nullptr, unit, nullptr, out3, mat, nullptr) ==
        QLS_ERR_NULL_POINTER);

  qls_conic_destroy(nullptr);
  qls_polylines_destroy(nullptr);
  qls_field_destroy(nullptr);
}
