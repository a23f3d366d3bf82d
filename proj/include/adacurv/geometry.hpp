#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "adacurv/error.hpp"

namespace adacurv {

using Point3 = Eigen::Vector3d;

/// Result of a fixed-radius range query. `indices` and `distances` run in
/// parallel, sorted by index, and satisfy 0 < distance < radius: the query
/// point itself (and any duplicate sitting exactly on it) is excluded.
struct NeighborSet {
  std::vector<int> indices;
  std::vector<double> distances;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Maximum pairwise distance of the data. Exact for m <= 20000; beyond that
/// the bounding-box diagonal is returned instead (an upper bound within a
/// factor of sqrt(3) of the exact value).
inline double data_bound(const std::vector<Point3>& points) {
  if (points.empty()) fail(Errc::EmptyCloud, "data_bound: no points");
  constexpr std::size_t kExactLimit = 20000;
  const std::size_t m = points.size();
  if (m <= kExactLimit) {
    double best_sq = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const Point3& pi = points[i];
      for (std::size_t j = i + 1; j < m; ++j) {
        best_sq = std::max(best_sq, (points[j] - pi).squaredNorm());
      }
    }
    return std::sqrt(best_sq);
  }
  Point3 lo = points.front();
  Point3 hi = points.front();
  for (const Point3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

/// Immutable point set with a uniform-grid acceleration structure for exact
/// fixed-radius queries. Safe to query concurrently from any number of
/// threads once built. Clouds below 256 points skip the grid and scan.
class PointCloud {
 public:
  const std::vector<Point3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

  /// Cached data bound (see data_bound()).
  double delta() const { return delta_; }

  /// Exact range query: all cloud points with 0 < |q - center| < radius,
  /// sorted by point index.
  void query(const Point3& center, double radius, NeighborSet& out) const {
    out.indices.clear();
    out.distances.clear();
    if (!(radius > 0.0)) fail(Errc::InvalidRadius, "neighbors_within: radius must be > 0");
    const double r_sq = radius * radius;
    if (!use_grid_) {
      for (std::size_t j = 0; j < points_.size(); ++j) {
        const double d_sq = (points_[j] - center).squaredNorm();
        if (d_sq > 0.0 && d_sq < r_sq) {
          out.indices.push_back(static_cast<int>(j));
          out.distances.push_back(std::sqrt(d_sq));
        }
      }
      return;
    }
    std::array<int, 3> lo_cell;
    std::array<int, 3> hi_cell;
    for (int axis = 0; axis < 3; ++axis) {
      lo_cell[axis] = cell_coord(center[axis] - radius, axis);
      hi_cell[axis] = cell_coord(center[axis] + radius, axis);
    }
    for (int cx = lo_cell[0]; cx <= hi_cell[0]; ++cx) {
      for (int cy = lo_cell[1]; cy <= hi_cell[1]; ++cy) {
        for (int cz = lo_cell[2]; cz <= hi_cell[2]; ++cz) {
          const std::size_t cell = flat_cell(cx, cy, cz);
          for (std::size_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
            const int j = cell_points_[k];
            const double d_sq = (points_[j] - center).squaredNorm();
            if (d_sq > 0.0 && d_sq < r_sq) {
              out.indices.push_back(j);
              out.distances.push_back(std::sqrt(d_sq));
            }
          }
        }
      }
    }
    // Grid traversal visits cells out of index order; restore it.
    sort_by_index(out);
  }

  friend PointCloud build_cloud(std::vector<Point3> points);

 private:
  PointCloud() = default;

  int cell_coord(double x, int axis) const {
    const double t = (x - origin_[axis]) * inv_cell_;
    int c = static_cast<int>(std::floor(t));
    return std::clamp(c, 0, dims_[axis] - 1);
  }

  std::size_t flat_cell(int cx, int cy, int cz) const {
    return (static_cast<std::size_t>(cx) * dims_[1] + cy) * dims_[2] + cz;
  }

  static void sort_by_index(NeighborSet& out) {
    const std::size_t n = out.indices.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.indices[a] < out.indices[b]; });
    NeighborSet sorted;
    sorted.indices.reserve(n);
    sorted.distances.reserve(n);
    for (std::size_t i : order) {
      sorted.indices.push_back(out.indices[i]);
      sorted.distances.push_back(out.distances[i]);
    }
    out = std::move(sorted);
  }

  void build_grid() {
    Point3 lo = points_.front();
    Point3 hi = points_.front();
    for (const Point3& p : points_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Point3 ext = hi - lo;
    const double diag = ext.norm();
    const double target = diag / std::cbrt(static_cast<double>(points_.size()));
    const double cell = std::max(target, diag * 1e-9 + std::numeric_limits<double>::min());
    origin_ = lo;
    inv_cell_ = 1.0 / cell;
    for (int axis = 0; axis < 3; ++axis) {
      const int n = static_cast<int>(std::floor(ext[axis] * inv_cell_)) + 1;
      dims_[axis] = std::clamp(n, 1, 128);
    }
    // Counting sort of points into cells (CSR layout).
    const std::size_t n_cells =
        static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    cell_start_.assign(n_cells + 1, 0);
    std::vector<std::size_t> cell_of(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const std::size_t c = flat_cell(cell_coord(points_[i].x(), 0),
                                      cell_coord(points_[i].y(), 1),
                                      cell_coord(points_[i].z(), 2));
      cell_of[i] = c;
      ++cell_start_[c + 1];
    }
    for (std::size_t c = 0; c < n_cells; ++c) cell_start_[c + 1] += cell_start_[c];
    cell_points_.resize(points_.size());
    std::vector<std::size_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cell_points_[cursor[cell_of[i]]++] = static_cast<int>(i);
    }
    use_grid_ = true;
  }

  std::vector<Point3> points_;
  double delta_ = 0.0;

  bool use_grid_ = false;
  Point3 origin_ = Point3::Zero();
  double inv_cell_ = 0.0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<std::size_t> cell_start_;
  std::vector<int> cell_points_;
};

inline PointCloud build_cloud(std::vector<Point3> points) {
  if (points.empty()) fail(Errc::EmptyCloud, "build_cloud: no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite())
      fail(Errc::InvalidCoordinate,
           "build_cloud: non-finite coordinate at point " + std::to_string(i));
  }
  PointCloud cloud;
  cloud.points_ = std::move(points);
  cloud.delta_ = data_bound(cloud.points_);
  if (cloud.points_.size() >= 256) cloud.build_grid();
  return cloud;
}

inline NeighborSet neighbors_within(const PointCloud& cloud, const Point3& center,
                                    double radius) {
  NeighborSet out;
  cloud.query(center, radius, out);
  return out;
}

}  // namespace adacurv
