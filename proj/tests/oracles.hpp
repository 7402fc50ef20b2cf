// Independent reference implementations used to cross-check library
// results. Everything here is written from the definitions, on purpose
// sharing no code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

struct Quad {
  double q11, q12, q22;  // f(x, y) = q11 x^2 + 2 q12 x y + q22 y^2 - 1
};

inline double quad_value(const Quad& q, double x, double y) {
  return q.q11 * x * x + 2.0 * q.q12 * x * y + q.q22 * y * y - 1.0;
}

// All common zeros of two quadratic-form residuals, found by a dense sign
// scan over [-lim, lim]^2 followed by Newton refinement from every cell
// where both residuals change sign.
inline std::vector<std::pair<double, double>> intersect(
    const Quad& a, const Quad& b, std::size_t grid = 2000, double lim = 1.6) {
  const std::size_t n = grid + 1;
  const double h = 2.0 * lim / static_cast<double>(grid);
  std::vector<signed char> sa(n * n), sb(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = -lim + static_cast<double>(j) * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -lim + static_cast<double>(i) * h;
      sa[j * n + i] = quad_value(a, x, y) >= 0.0 ? 1 : -1;
      sb[j * n + i] = quad_value(b, x, y) >= 0.0 ? 1 : -1;
    }
  }

  std::vector<std::pair<double, double>> found;
  auto mixed = [n](const std::vector<signed char>& s, std::size_t i,
                   std::size_t j) {
    const signed char c = s[j * n + i];
    return s[j * n + i + 1] != c || s[(j + 1) * n + i] != c ||
           s[(j + 1) * n + i + 1] != c;
  };
  for (std::size_t j = 0; j < grid; ++j) {
    for (std::size_t i = 0; i < grid; ++i) {
      if (!mixed(sa, i, j) || !mixed(sb, i, j)) continue;
      double x = -lim + (static_cast<double>(i) + 0.5) * h;
      double y = -lim + (static_cast<double>(j) + 0.5) * h;
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const double fa = quad_value(a, x, y);
        const double fb = quad_value(b, x, y);
        if (std::abs(fa) < 1e-12 && std::abs(fb) < 1e-12) {
          ok = true;
          break;
        }
        const double j11 = 2.0 * (a.q11 * x + a.q12 * y);
        const double j12 = 2.0 * (a.q12 * x + a.q22 * y);
        const double j21 = 2.0 * (b.q11 * x + b.q12 * y);
        const double j22 = 2.0 * (b.q12 * x + b.q22 * y);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) break;
        x -= (fa * j22 - fb * j12) / det;
        y -= (j11 * fb - j21 * fa) / det;
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& p : found) {
        if (std::hypot(p.first - x, p.second - y) < 1e-6) {
          dup = true;
          break;
        }
      }
      if (!dup) found.emplace_back(x, y);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

// Node labels for a level-set field: 0 outside, 1 interface, 2 inside.
// A node is on the interface when a 4-neighbor lies on the other side of
// the zero level and the node is the nearer of the pair (ties kept).
inline std::vector<int> classify(std::size_t nx, std::size_t ny,
                                 const std::vector<double>& phi) {
  std::vector<int> labels(nx * ny);
  auto inside = [](double v) { return v <= 0.0; };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double c = phi[j * nx + i];
      bool iface = false;
      const long di[4] = {1, -1, 0, 0};
      const long dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4 && !iface; ++k) {
        const long ii = static_cast<long>(i) + di[k];
        const long jj = static_cast<long>(j) + dj[k];
        if (ii < 0 || jj < 0 || ii >= static_cast<long>(nx) ||
            jj >= static_cast<long>(ny)) {
          continue;
        }
        const double m = phi[static_cast<std::size_t>(jj) * nx +
                             static_cast<std::size_t>(ii)];
        if (inside(m) != inside(c) && std::abs(c) <= std::abs(m)) iface = true;
      }
      labels[j * nx + i] = iface ? 1 : (inside(c) ? 2 : 0);
    }
  }
  return labels;
}

// Lattice points whose float energy matches the target within 1e-12.
inline std::vector<std::pair<long long, long long>> level_set_float(
    double energy, double wx, double wy, long long n_max, bool zero_point) {
  std::vector<std::pair<long long, long long>> out;
  const double base = zero_point ? 0.5 * (wx + wy) : 0.0;
  for (long long nx = 0; nx <= n_max; ++nx) {
    for (long long ny = 0; ny <= n_max; ++ny) {
      const double e =
          base + static_cast<double>(nx) * wx + static_cast<double>(ny) * wy;
      if (std::abs(e - energy) < 1e-12) out.emplace_back(nx, ny);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
