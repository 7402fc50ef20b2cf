/* Public C interface of the level-set quantum-control library.
 *
 * Conventions:
 *   - Every function returns a qls_status; QLS_OK (0) means success.
 *   - On failure, qls_last_error_message() returns a thread-local
 *     description, valid until the next failing call on the same thread.
 *   - Objects behind opaque handles are created by qls_*_create/derive
 *     functions and must be released with the matching destroy function.
 *   - States are unit-norm real coefficient vectors; three-level states
 *     are passed as double[3]. Matrices are row-major.
 */
#ifndef QLS_QLS_H
#define QLS_QLS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qls_status {
  QLS_OK = 0,
  QLS_ERR_INVALID_ARGUMENT = 1,
  QLS_ERR_DIMENSION_MISMATCH = 2,
  QLS_ERR_NOT_NORMALIZED = 3,
  QLS_ERR_ZERO_VECTOR = 4,
  QLS_ERR_ASYMMETRIC_MATRIX = 5,
  QLS_ERR_DEGENERATE_CONTOUR = 6,
  QLS_ERR_TARGET_UNATTAINABLE = 7,
  QLS_ERR_CHART_EXIT = 8,
  QLS_ERR_IDENTICAL_CONICS = 9,
  QLS_ERR_DOMAIN_TOO_SMALL = 10,
  QLS_ERR_NO_INTERFACE = 11,
  QLS_ERR_BAD_SPEED = 12,
  QLS_ERR_BAD_TIME = 13,
  QLS_ERR_NOT_POSITIVE_DEFINITE = 14,
  QLS_ERR_NEGATIVE_OCCUPATION = 15,
  QLS_ERR_UNREACHABLE_TARGET = 16,
  QLS_ERR_OFF_CONTOUR = 17,
  QLS_ERR_NULL_POINTER = 90,
  QLS_ERR_BUFFER_TOO_SMALL = 91,
  QLS_ERR_INTERNAL = 99
} qls_status;

/* Static name of a status code ("QLS_OK", "invalid argument", ...). */
const char* qls_strerror(int status);

/* Thread-local message describing the most recent failure on this thread. */
const char* qls_last_error_message(void);

/* ---------------- states and expectation values ---------------- */

/* Scales raw[0..n) to unit norm into out[0..n). */
qls_status qls_normalize(const double* raw, size_t n, double* out);

/* <E> = sum_i state_i^2 spectrum_i. */
qls_status qls_expectation_energy(const double* state, const double* spectrum,
                                  size_t n, double* out);

/* state^T obs state with obs a symmetric n x n row-major matrix. */
qls_status qls_expectation_observable(const double* state, const double* obs,
                                      size_t n, double* out);

/* ---------------- plane contours (conic level sets) ---------------- */

typedef struct qls_conic qls_conic;

/* Constant-energy contour of a three-level spectrum (minimum stored last)
 * at the given target expectation value. */
qls_status qls_energy_contour(const double spectrum[3], double target,
                              qls_conic** out);

/* Contour of the quadratic form q11 x^2 + 2 q12 x y + q22 y^2 = 1. */
qls_status qls_conic_from_quad(double q11, double q12, double q22,
                               qls_conic** out);

void qls_conic_destroy(qls_conic* conic);

qls_status qls_conic_coeffs(const qls_conic* conic, double* q11, double* q12,
                            double* q22);

/* Semi-axes and frame angle of an elliptic contour. */
qls_status qls_conic_axes(const qls_conic* conic, double* semi_a,
                          double* semi_b, double* angle);

/* Quadratic-form residual of a plane point (0 on the contour). */
qls_status qls_conic_residual(const qls_conic* conic, double x, double y,
                              double* out);

/* Contour point at ellipse parameter theta, lifted to the unit sphere
 * (out = a1, a2, a3 with a3 >= 0). Fails with QLS_ERR_CHART_EXIT when the
 * ellipse leaves the unit disk there. */
qls_status qls_conic_point_at(const qls_conic* conic, double theta,
                              double out[3]);

/* count parameter-uniform samples. thetas (may be NULL) receives the kept
 * parameters, points the kept lifted states packed as triples; both must
 * hold count entries. kept + dropped = count; dropped samples left the
 * unit-sphere chart. */
qls_status qls_sample_contour(const qls_conic* conic, size_t count,
                              double* thetas, double* points, size_t* kept,
                              size_t* dropped);

/* Distance from a plane point to the contour, negative inside. */
qls_status qls_signed_distance(const qls_conic* conic, double x, double y,
                               double* out);

/* First-order motion of on-contour plane points (pairs, m of them) under a
 * small change of the target value. Writes the moved plane points (m pairs)
 * and the exact contour at the stepped target. */
qls_status qls_perturb_contour(const qls_conic* conic, const double* points,
                               size_t m, double d_target, double* moved,
                               qls_conic** stepped);

/* All intersection points of two distinct conics: at most 4 pairs written
 * to out_points. */
qls_status qls_intersect_conics(const qls_conic* a, const qls_conic* b,
                                double out_points[8], size_t* count);

/* ---------------- polyline batches ---------------- */

typedef struct qls_polylines qls_polylines;

void qls_polylines_destroy(qls_polylines* lines);

qls_status qls_polylines_count(const qls_polylines* lines, size_t* count);

/* Vertex count and closedness of one polyline. */
qls_status qls_polylines_info(const qls_polylines* lines, size_t index,
                              size_t* point_count, int* closed);

/* Vertices of one polyline as x,y pairs; buffer holds 2 * point_count. */
qls_status qls_polylines_points(const qls_polylines* lines, size_t index,
                                double* xy);

/* Zero contours of the secondary observable's expectation minus target
 * over the unit disk (obs is 3 x 3 row-major symmetric). resolution cells
 * per axis, at least 16. degenerate is set when the expectation is
 * constant at the target over the whole disk. */
qls_status qls_theta_contour(const double obs[9], double target,
                             size_t resolution, qls_polylines** out,
                             int* degenerate);

/* ---------------- level-set grid engine ---------------- */

typedef struct qls_field qls_field;

void qls_field_destroy(qls_field* field);

/* Signed distance to a circle, sampled on an nx x ny grid with spacing h
 * and lower-left node (ox, oy). The circle must keep a 2h margin. */
qls_status qls_field_from_circle(double cx, double cy, double radius,
                                 size_t nx, size_t ny, double h, double ox,
                                 double oy, qls_field** out);

/* Same, initialized from a conic contour. */
qls_status qls_field_from_conic(const qls_conic* conic, size_t nx, size_t ny,
                                double h, double ox, double oy,
                                qls_field** out);

/* Field from explicit values (row-major, x fastest). */
qls_status qls_field_from_values(size_t nx, size_t ny, double h, double ox,
                                 double oy, const double* values,
                                 qls_field** out);

qls_status qls_field_dims(const qls_field* field, size_t* nx, size_t* ny,
                          double* h, double* ox, double* oy);

/* Copies all nx * ny values row-major into out. */
qls_status qls_field_values(const qls_field* field, double* out);

/* Advances the zero contour at constant normal speed for time t. */
qls_status qls_field_evolve(const qls_field* field, double speed, double t,
                            qls_field** out);

/* Same with one speed value per node (row-major). */
qls_status qls_field_evolve_varying(const qls_field* field,
                                    const double* speeds, double t,
                                    qls_field** out);

/* Rebuilds the field as a signed distance to its own zero level. */
qls_status qls_field_reinitialize(const qls_field* field, qls_field** out);

/* Labels every node: 0 outside, 1 interface, 2 inside. labels holds
 * nx * ny bytes, row-major. */
qls_status qls_field_classify(const qls_field* field, unsigned char* labels);

/* Zero-level polylines by marching squares. */
qls_status qls_field_extract(const qls_field* field, qls_polylines** out);

/* CSV rendering of the field (metadata header plus row-major values).
 * Two-call pattern: pass buf = NULL to get the needed size (including the
 * terminating NUL) in *needed. */
qls_status qls_field_csv(const qls_field* field, char* buf, size_t cap,
                         size_t* needed);

/* ---------------- orthogonal control maps ---------------- */

/* Minimal rotation sending unit vector p to unit vector q; mat holds
 * n * n entries row-major. */
qls_status qls_rotation_between(const double* p, const double* q, size_t n,
                                double* mat);

/* Map sending the source contour's anchor p_o to the target contour's
 * anchor q_o; both must lie on their contours. */
qls_status qls_transfer_anchor(const qls_conic* source, const double p_o[3],
                               const qls_conic* target, const double q_o[3],
                               double mat[9]);

/* Full contract / transfer / expand protocol for m source points with
 * one assigned target each (triples). Outputs, when non-NULL:
 *   waypoints: m * 12 doubles (per point: p_k, p_o, q_o, q_k as triples),
 *   maps:      m * 27 doubles (per point: contract, transfer, expand 3x3).
 */
qls_status qls_three_step(const qls_conic* source, const double* points,
                          size_t m, const double p_o[3],
                          const qls_conic* target, const double q_o[3],
                          const double* assigned, double* waypoints,
                          double* maps);

/* Equal-parameter one-step transition of p to the destination contour.
 * On QLS_ERR_CHART_EXIT, *theta_out (when non-NULL) receives the offending
 * parameter. */
qls_status qls_direct_map(const qls_conic* source, const double p[3],
                          const qls_conic* destination, double q_out[3],
                          double mat[9], double* theta_out);

/* Searches m points (n coefficients each, row-major) for a pair whose
 * inner product differs from 1, ruling out one map sending all of them to
 * the anchor. found is 0 or 1; on 1, i/j/inner describe the pair. */
qls_status qls_witness(const double* points, size_t m, size_t n,
                       const double* anchor, size_t* i, size_t* j,
                       double* inner, int* found);

/* ---------------- oscillator occupation lattice ---------------- */

typedef struct qls_rational {
  long long num;
  long long den;
} qls_rational;

typedef struct qls_pulse_step {
  int axis; /* 0 = x, 1 = y */
  long long delta_quanta;
  qls_rational frequency; /* |delta_quanta| times the axis frequency */
} qls_pulse_step;

/* Normal-mode frequencies from a symmetric positive-definite 2x2 stiffness
 * matrix (k11, k12, k22), sorted descending. */
qls_status qls_oscillator_frequencies(double k11, double k12, double k22,
                                      double* w_hi, double* w_lo);

/* Exact oscillator energy of occupation (nx, ny). */
qls_status qls_oscillator_energy(long long nx, long long ny, qls_rational wx,
                                 qls_rational wy, int include_zero_point,
                                 qls_rational* out);

/* Lattice points with the exact target energy inside [0, n_max]^2, sorted
 * by nx. points receives nx,ny pairs; cap is its pair capacity. When cap
 * is too small, fails with QLS_ERR_BUFFER_TOO_SMALL and still reports the
 * needed count. Pass points = NULL, cap = 0 to query the count. */
qls_status qls_oscillator_level_set(qls_rational energy, qls_rational wx,
                                    qls_rational wy, long long n_max,
                                    int include_zero_point, long long* points,
                                    size_t cap, size_t* count);

/* Pulse plans from (fx, fy) to the nearest point of the target level set.
 * At most 2 plans of at most 2 steps each: steps holds up to 4 entries,
 * lens[k] the length of plan k. A single empty plan means the start
 * already has the target energy. */
qls_status qls_oscillator_plan(long long fx, long long fy,
                               qls_rational target_energy, qls_rational wx,
                               qls_rational wy, int include_zero_point,
                               long long n_max, qls_pulse_step steps[4],
                               size_t lens[2], size_t* plan_count);

/* Applies one pulse step to an occupation pair. */
qls_status qls_oscillator_apply(long long nx, long long ny,
                                const qls_pulse_step* step, long long* out_nx,
                                long long* out_ny);

#ifdef __cplusplus
}
#endif

#endif /* QLS_QLS_H */
