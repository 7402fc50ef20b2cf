#include "marching_squares.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>

#include "qls/errors.hpp"

namespace qls::detail {

namespace {

// Edge of the node grid: horizontal edges keyed by their left node,
// vertical edges by their bottom node.
enum class EdgeDir : std::uint64_t { Horizontal = 0, Vertical = 1 };

std::uint64_t edge_key(std::size_t i, std::size_t j, EdgeDir dir) {
  return (static_cast<std::uint64_t>(j) << 33) |
         (static_cast<std::uint64_t>(i) << 1) |
         static_cast<std::uint64_t>(dir);
}

struct Builder {
  const MarchGrid& g;
  std::unordered_map<std::uint64_t, std::size_t> edge_vertex;
  std::vector<PlanePoint> vertices;
  std::vector<std::array<std::size_t, 2>> segments;

  double value(std::size_t i, std::size_t j) const {
    return g.values[j * g.nx + i];
  }
  bool node_valid(std::size_t i, std::size_t j) const {
    return g.valid == nullptr || g.valid[j * g.nx + i] != 0;
  }
  bool positive(double v) const { return v >= 0.0; }

  std::size_t crossing(std::size_t i, std::size_t j, EdgeDir dir) {
    const std::uint64_t key = edge_key(i, j, dir);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;

    const double v0 = value(i, j);
    const double v1 = dir == EdgeDir::Horizontal ? value(i + 1, j)
                                                 : value(i, j + 1);
    const double t = v0 / (v0 - v1);  // sign change guarantees v0 != v1
    PlanePoint p;
    if (dir == EdgeDir::Horizontal) {
      p = {g.ox + (static_cast<double>(i) + t) * g.hx,
           g.oy + static_cast<double>(j) * g.hy};
    } else {
      p = {g.ox + static_cast<double>(i) * g.hx,
           g.oy + (static_cast<double>(j) + t) * g.hy};
    }
    const std::size_t idx = vertices.size();
    vertices.push_back(p);
    edge_vertex.emplace(key, idx);
    return idx;
  }

  void add_segment(std::size_t a, std::size_t b) {
    if (a != b) segments.push_back({a, b});
  }
};

}  // namespace

std::vector<Polyline> march_zero_contours(const MarchGrid& grid) {
  if (grid.nx < 2 || grid.ny < 2 || grid.values == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "marching-squares grid too small");
  }

  Builder b{grid, {}, {}, {}};

  for (std::size_t j = 0; j + 1 < grid.ny; ++j) {
    for (std::size_t i = 0; i + 1 < grid.nx; ++i) {
      if (!b.node_valid(i, j) || !b.node_valid(i + 1, j) ||
          !b.node_valid(i, j + 1) || !b.node_valid(i + 1, j + 1)) {
        continue;
      }
      const double v00 = b.value(i, j);
      const double v10 = b.value(i + 1, j);
      const double v01 = b.value(i, j + 1);
      const double v11 = b.value(i + 1, j + 1);

      int c = 0;
      if (b.positive(v00)) c |= 1;
      if (b.positive(v10)) c |= 2;
      if (b.positive(v11)) c |= 4;
      if (b.positive(v01)) c |= 8;
      if (c == 0 || c == 15) continue;

      // Edge crossings of this cell, lazily created and shared between
      // neighboring cells via the edge map.
      auto bottom = [&] { return b.crossing(i, j, EdgeDir::Horizontal); };
      auto top = [&] { return b.crossing(i, j + 1, EdgeDir::Horizontal); };
      auto left = [&] { return b.crossing(i, j, EdgeDir::Vertical); };
      auto right = [&] { return b.crossing(i + 1, j, EdgeDir::Vertical); };

      switch (c) {
        case 1: case 14: b.add_segment(left(), bottom()); break;
        case 2: case 13: b.add_segment(bottom(), right()); break;
        case 3: case 12: b.add_segment(left(), right()); break;
        case 4: case 11: b.add_segment(right(), top()); break;
        case 6: case 9:  b.add_segment(bottom(), top()); break;
        case 7: case 8:  b.add_segment(top(), left()); break;
        case 5: case 10: {
          // Saddle: split by the cell-center average.
          const double center = 0.25 * (v00 + v10 + v01 + v11);
          const bool center_pos = b.positive(center);
          if ((c == 5) == center_pos) {
            b.add_segment(left(), top());
            b.add_segment(bottom(), right());
          } else {
            b.add_segment(left(), bottom());
            b.add_segment(right(), top());
          }
          break;
        }
        default: break;
      }
    }
  }

  // Chain segments into polylines over shared edge vertices.
  const std::size_t nv = b.vertices.size();
  std::vector<std::vector<std::size_t>> incident(nv);
  for (std::size_t s = 0; s < b.segments.size(); ++s) {
    incident[b.segments[s][0]].push_back(s);
    incident[b.segments[s][1]].push_back(s);
  }

  std::vector<bool> used(b.segments.size(), false);
  std::vector<Polyline> out;

  auto walk = [&](std::size_t start_vertex) {
    Polyline line;
    std::size_t v = start_vertex;
    line.points.push_back(b.vertices[v]);
    while (true) {
      std::size_t next_seg = b.segments.size();
      for (std::size_t s : incident[v]) {
        if (!used[s]) {
          next_seg = s;
          break;
        }
      }
      if (next_seg == b.segments.size()) break;
      used[next_seg] = true;
      const auto& seg = b.segments[next_seg];
      v = seg[0] == v ? seg[1] : seg[0];
      if (v == start_vertex) {
        line.closed = true;
        break;
      }
      line.points.push_back(b.vertices[v]);
    }
    return line;
  };

  // Open chains first (their endpoints have odd degree), then loops.
  for (std::size_t v = 0; v < nv; ++v) {
    if (incident[v].size() % 2 == 1) {
      bool pending = false;
      for (std::size_t s : incident[v]) pending |= !used[s];
      if (pending) out.push_back(walk(v));
    }
  }
  for (std::size_t s = 0; s < b.segments.size(); ++s) {
    if (!used[s]) out.push_back(walk(b.segments[s][0]));
  }
  return out;
}

}  // namespace qls::detail
