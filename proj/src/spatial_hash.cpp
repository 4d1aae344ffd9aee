#include "boolperc/spatial_hash.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace boolperc {

CellGrid::CellGrid(std::span<const Point> points, double cell_size) : cell_(cell_size) {
  if (!points.empty()) {
    double x1 = -std::numeric_limits<double>::infinity();
    double y1 = x1;
    x0_ = y0_ = std::numeric_limits<double>::infinity();
    for (const Point& p : points) {
      x0_ = std::min(x0_, p.x());
      y0_ = std::min(y0_, p.y());
      x1 = std::max(x1, p.x());
      y1 = std::max(y1, p.y());
    }
    // Cap the table at a few cells per point; beyond that a coarser grid
    // only costs extra candidate tests.
    const double limit = 4.0 * static_cast<double>(points.size()) + 16.0;
    while (((x1 - x0_) / cell_ + 1.0) * ((y1 - y0_) / cell_ + 1.0) > limit) cell_ *= 2.0;
    cols_ = static_cast<int>((x1 - x0_) / cell_) + 1;
    rows_ = static_cast<int>((y1 - y0_) / cell_) + 1;
  }
  const std::size_t ncells = static_cast<std::size_t>(cols_) * rows_;
  offsets_.assign(ncells + 1, 0);
  std::vector<std::uint32_t> cell_ids(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t c =
        static_cast<std::size_t>(row_of(points[i].y())) * cols_ + col_of(points[i].x());
    cell_ids[i] = static_cast<std::uint32_t>(c);
    ++offsets_[c + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  ids_.resize(points.size());
  points_.resize(points.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::uint32_t slot = fill[cell_ids[i]]++;
    ids_[slot] = static_cast<std::uint32_t>(i);
    points_[slot] = points[i];
  }
}

std::pair<double, std::uint32_t> CellGrid::nearest(const Point& p) const {
  double best2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_slot = UINT32_MAX;
  if (points_.empty()) return {best2, best_slot};
  // Unclamped cell of p; rings are visited outward and the search stops once
  // no unvisited cell can hold a closer point.
  const double fx = std::floor((p.x() - x0_) / cell_);
  const double fy = std::floor((p.y() - y0_) / cell_);
  const double far = std::max({-fx, fx - (cols_ - 1), -fy, fy - (rows_ - 1), 0.0});
  const long cx = static_cast<long>(fx);
  const long cy = static_cast<long>(fy);
  const long max_ring = static_cast<long>(far) + std::max(cols_, rows_);
  auto visit_cell = [&](long col, long row) {
    if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return;
    const std::size_t c = static_cast<std::size_t>(row) * cols_ + static_cast<std::size_t>(col);
    for (std::uint32_t s = offsets_[c]; s < offsets_[c + 1]; ++s) {
      const double d2 = (points_[s] - p).squaredNorm();
      if (d2 < best2) {
        best2 = d2;
        best_slot = s;
      }
    }
  };
  for (long k = static_cast<long>(far); k <= max_ring; ++k) {
    if (k == 0) {
      visit_cell(cx, cy);
    } else {
      for (long col = cx - k; col <= cx + k; ++col) {
        visit_cell(col, cy - k);
        visit_cell(col, cy + k);
      }
      for (long row = cy - k + 1; row <= cy + k - 1; ++row) {
        visit_cell(cx - k, row);
        visit_cell(cx + k, row);
      }
    }
    const double reach = static_cast<double>(k) * cell_;
    if (best2 <= reach * reach) break;
  }
  return {std::sqrt(best2), best_slot};
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), 0u);
}

std::uint32_t UnionFind::find(std::uint32_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b] || (size_[a] == size_[b] && a > b)) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

}  // namespace boolperc
