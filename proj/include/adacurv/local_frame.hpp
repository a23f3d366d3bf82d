#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "adacurv/geometry.hpp"
#include "adacurv/kernel.hpp"

namespace adacurv {

/// Orthonormal tangent frame at a query point. e1/e2 span the tangent plane,
/// n is the normal, sigma holds the singular values of the kernel-weighted
/// neighborhood matrix in descending order.
struct LocalFrame {
  Eigen::Vector3d e1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d e2 = Eigen::Vector3d::Zero();
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  std::array<double, 3> sigma{0.0, 0.0, 0.0};
  int neighbor_count = 0;
};

namespace detail {

// Collinear neighborhoods admit no tangent plane.
inline constexpr double kRankTolerance = 1e-12;

struct NeighborRec {
  double dist;
  int index;
};

/// Range query returning records sorted by (distance, index). All weighted
/// accumulations in the library iterate in this order, so quantities computed
/// from a radius-r query agree bit-for-bit with prefix-based recomputation.
inline std::vector<NeighborRec> sorted_neighbors(const PointCloud& cloud, const Point3& p,
                                                 double radius) {
  NeighborSet set = neighbors_within(cloud, p, radius);
  std::vector<NeighborRec> recs(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    recs[i] = NeighborRec{set.distances[i], set.indices[i]};
  }
  std::sort(recs.begin(), recs.end(), [](const NeighborRec& a, const NeighborRec& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.index < b.index;
  });
  return recs;
}

/// First `count` records of `recs` with kernel weights K(d/r):
/// M = sum_j K(d_j/r) (x_j - p)(x_j - p)^T. The eigenvalues of M are the
/// squared singular values of the weighted neighborhood matrix X D with
/// D = diag(sqrt(K(d_j/r))).
inline Eigen::Matrix3d weighted_moment(const PointCloud& cloud, const Point3& p,
                                       const std::vector<NeighborRec>& recs,
                                       std::size_t count, double radius,
                                       const Kernel& kernel, double& weight_sum) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  weight_sum = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double w = kernel_eval(kernel, recs[j].dist / radius);
    const Eigen::Vector3d v = cloud[recs[j].index] - p;
    m.noalias() += w * (v * v.transpose());
    weight_sum += w;
  }
  return m;
}

struct MomentEigen {
  std::array<double, 3> lambda{0.0, 0.0, 0.0};  // descending, clamped at 0
  Eigen::Matrix3d vectors;                      // column i pairs with lambda[i]
};

inline MomentEigen moment_eigen(const Eigen::Matrix3d& m, bool vectors_needed) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
  solver.compute(m, vectors_needed ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  MomentEigen out;
  // Eigen reports eigenvalues in increasing order.
  for (int i = 0; i < 3; ++i) out.lambda[i] = std::max(solver.eigenvalues()[2 - i], 0.0);
  if (vectors_needed) {
    out.vectors.col(0) = solver.eigenvectors().col(2);
    out.vectors.col(1) = solver.eigenvectors().col(1);
    out.vectors.col(2) = solver.eigenvectors().col(0);
  }
  return out;
}

inline LocalFrame frame_from_sorted(const PointCloud& cloud, const Point3& p,
                                    const std::vector<NeighborRec>& recs, std::size_t count,
                                    double radius, const Kernel& kernel) {
  if (count < 3)
    fail(Errc::InsufficientNeighbors,
         "weighted_local_pca: need at least 3 neighbors, got " + std::to_string(count));
  double weight_sum = 0.0;
  const Eigen::Matrix3d m = weighted_moment(cloud, p, recs, count, radius, kernel, weight_sum);
  if (!(weight_sum > 0.0))
    fail(Errc::DegenerateWeights, "weighted_local_pca: all kernel weights are zero");
  const MomentEigen eig = moment_eigen(m, true);
  LocalFrame frame;
  for (int i = 0; i < 3; ++i) frame.sigma[i] = std::sqrt(eig.lambda[i]);
  if (frame.sigma[1] < kRankTolerance * frame.sigma[0])
    fail(Errc::DegenerateNeighborhood,
         "weighted_local_pca: neighborhood has rank < 2 within tolerance");
  frame.e1 = eig.vectors.col(0);
  frame.e2 = eig.vectors.col(1);
  frame.n = eig.vectors.col(2);
  frame.neighbor_count = static_cast<int>(count);
  return frame;
}

inline Point3 centroid_of_sorted(const PointCloud& cloud, const std::vector<NeighborRec>& recs,
                                 std::size_t count) {
  Point3 sum = Point3::Zero();
  for (std::size_t j = 0; j < count; ++j) sum += cloud[recs[j].index];
  return sum / static_cast<double>(count);
}

}  // namespace detail

/// Kernel-weighted local PCA at p over the radius-r neighborhood. Columns of
/// the neighborhood matrix are x_j - p, reweighted by sqrt(K(d_j/r)); the
/// left singular vectors, ordered by descending singular value, give the
/// tangent basis (e1, e2) and the normal n. The normal sign is whatever the
/// decomposition produced; see orient_normal.
inline LocalFrame weighted_local_pca(const PointCloud& cloud, const Point3& p, double r,
                                     const Kernel& kernel) {
  const std::vector<detail::NeighborRec> recs = detail::sorted_neighbors(cloud, p, r);
  return detail::frame_from_sorted(cloud, p, recs, recs.size(), r, kernel);
}

/// Fix the normal sign so it points from the neighborhood centroid toward p
/// (n . (p - centroid) >= 0). An exact tie keeps the decomposition's sign.
/// Tangent vectors are untouched.
inline LocalFrame orient_normal(LocalFrame frame, const Point3& p,
                                const Point3& neighborhood_centroid) {
  if (frame.n.dot(p - neighborhood_centroid) < 0.0) frame.n = -frame.n;
  return frame;
}

}  // namespace adacurv
