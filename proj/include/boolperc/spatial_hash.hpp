#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "boolperc/geometry.hpp"

namespace boolperc {

/**
 * Uniform bucket grid over a fixed point set.
 *
 * Points are stored in cell order ("slots"), so neighbor scans touch
 * contiguous memory; `id(slot)` recovers the position in the input span.
 */
class CellGrid {
 public:
  CellGrid(std::span<const Point> points, double cell_size);

  double cell_size() const { return cell_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::uint32_t slot) const { return points_[slot]; }
  std::uint32_t id(std::uint32_t slot) const { return ids_[slot]; }
  std::span<const Point> points() const { return points_; }

  int col_of(double x) const { return clamp(static_cast<int>(std::floor((x - x0_) / cell_)), cols_); }
  int row_of(double y) const { return clamp(static_cast<int>(std::floor((y - y0_) / cell_)), rows_); }

  /// Visit every slot in the (2k+1) x (2k+1) block of cells around `p`.
  template <typename F>
  void for_each_near(const Point& p, int k, F&& visit) const {
    const int cx = col_of(p.x());
    const int cy = row_of(p.y());
    const int c0 = std::max(cx - k, 0);
    const int c1 = std::min(cx + k, cols_ - 1);
    for (int row = std::max(cy - k, 0); row <= std::min(cy + k, rows_ - 1); ++row) {
      const std::size_t base = static_cast<std::size_t>(row) * cols_;
      for (std::uint32_t s = offsets_[base + c0]; s < offsets_[base + c1 + 1]; ++s) visit(s);
    }
  }

  /// Distance from `p` to the nearest stored point and its slot; +inf and
  /// UINT32_MAX when the grid is empty.
  std::pair<double, std::uint32_t> nearest(const Point& p) const;

  /// Visit each unordered pair of slots lying in the same or in adjacent
  /// cells exactly once, cell by cell.
  template <typename F>
  void for_each_pair(F&& visit) const {
    for (int row = 0; row < rows_; ++row) {
      for (int col = 0; col < cols_; ++col) {
        const std::size_t c = static_cast<std::size_t>(row) * cols_ + col;
        const std::uint32_t b = offsets_[c];
        const std::uint32_t e = offsets_[c + 1];
        if (b == e) continue;
        for (std::uint32_t i = b; i < e; ++i) {
          for (std::uint32_t j = i + 1; j < e; ++j) visit(i, j);
        }
        // Forward half of the 3x3 stencil: east on this row, then three
        // cells on the next row.
        if (col + 1 < cols_) scan(b, e, offsets_[c + 1], offsets_[c + 2], visit);
        if (row + 1 < rows_) {
          const std::size_t up = c + cols_;
          const std::size_t lo = col > 0 ? up - 1 : up;
          const std::size_t hi = col + 1 < cols_ ? up + 1 : up;
          scan(b, e, offsets_[lo], offsets_[hi + 1], visit);
        }
      }
    }
  }

 private:
  template <typename F>
  static void scan(std::uint32_t b, std::uint32_t e, std::uint32_t ob, std::uint32_t oe, F& visit) {
    for (std::uint32_t i = b; i < e; ++i) {
      for (std::uint32_t j = ob; j < oe; ++j) visit(i, j);
    }
  }
  static int clamp(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

  double cell_;
  double x0_ = 0.0;
  double y0_ = 0.0;
  int cols_ = 1;
  int rows_ = 1;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> ids_;
  std::vector<Point> points_;
};

/// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::uint32_t find(std::uint32_t x);
  /// Returns false when a and b were already joined.
  bool unite(std::uint32_t a, std::uint32_t b);
  bool connected(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace boolperc
