#ifndef QLS_MARCHING_SQUARES_HPP
#define QLS_MARCHING_SQUARES_HPP

#include <cstddef>
#include <vector>

#include "qls/geometry.hpp"

namespace qls::detail {

// Node grid for zero-contour extraction. `values` is row-major with x
// fastest; `valid` (optional, same layout) masks nodes out of the domain.
// Cells touching an invalid node emit nothing, which leaves contours open
// at the domain boundary.
struct MarchGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double ox = 0.0;
  double oy = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  const double* values = nullptr;
  const unsigned char* valid = nullptr;
};

// Marching squares with linear edge interpolation. Zero node values count
// as the positive side. Traversal and chaining are fixed-order, so the
// output is identical run to run.
std::vector<Polyline> march_zero_contours(const MarchGrid& grid);

}  // namespace qls::detail

#endif
