#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "adacurv/adaptive_scale.hpp"
#include "adacurv/parallel.hpp"

namespace adacurv {

/// One directional-curvature sample: the chord v = q - p, the curvature
/// 2 (n . v) / |v|^2 it induces, and its kernel weight K(|v|/tau).
struct DirectionalSample {
  Eigen::Vector3d v;
  double kappa;
  double w;
  int index;  // neighbor index, used for deterministic tie handling
};

struct CurvatureConfig {
  double extreme_fraction = 0.2;  // slice of most extreme samples averaged per side
  Kernel kernel{};
  int min_tau_neighbors = 10;

  void validate() const {
    if (!(extreme_fraction > 0.0 && extreme_fraction < 1.0))
      fail(Errc::InvalidArgument, "CurvatureConfig: extreme_fraction must lie in (0,1)");
    if (min_tau_neighbors < 1)
      fail(Errc::InvalidArgument, "CurvatureConfig: min_tau_neighbors must be >= 1");
  }
};

/// Per-point estimate. kappa1 >= kappa2, gauss = kappa1 * kappa2 and
/// mean = kappa1 + kappa2 exactly. Invalid points carry NaN curvatures.
/// Note mean is the sum of the principal curvatures, twice the classical
/// (kappa1 + kappa2) / 2 mean curvature.
struct CurvatureResult {
  double kappa1 = std::numeric_limits<double>::quiet_NaN();
  double kappa2 = std::numeric_limits<double>::quiet_NaN();
  double gauss = std::numeric_limits<double>::quiet_NaN();
  double mean = std::numeric_limits<double>::quiet_NaN();
  Eigen::Vector3d d1 = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  Eigen::Vector3d d2 = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  Eigen::Vector3d normal =
      Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
  double eps_pca = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;
  bool direction_fallback = false;
};

namespace detail {

inline std::vector<DirectionalSample> samples_from_sorted(const PointCloud& cloud,
                                                          const Point3& p,
                                                          const LocalFrame& frame,
                                                          const std::vector<NeighborRec>& recs,
                                                          std::size_t count, double tau,
                                                          const Kernel& kernel,
                                                          int min_tau_neighbors) {
  if (count < static_cast<std::size_t>(min_tau_neighbors))
    fail(Errc::InsufficientNeighbors,
         "directional_samples: tau-neighborhood has " + std::to_string(count) +
             " points, need " + std::to_string(min_tau_neighbors));
  std::vector<DirectionalSample> samples(count);
  for (std::size_t j = 0; j < count; ++j) {
    const Eigen::Vector3d v = cloud[recs[j].index] - p;
    const double norm_sq = v.squaredNorm();
    samples[j] = DirectionalSample{v, 2.0 * frame.n.dot(v) / norm_sq,
                                   kernel_eval(kernel, recs[j].dist / tau), recs[j].index};
  }
  return samples;
}

// Orders for the two extreme slices. Selecting each slice with its own
// comparator (instead of slicing one sorted list) keeps the selection
// symmetric under kappa negation even when samples tie.
inline bool kappa_ascending(const DirectionalSample& a, const DirectionalSample& b) {
  if (a.kappa != b.kappa) return a.kappa < b.kappa;
  return a.index < b.index;
}

inline bool kappa_descending(const DirectionalSample& a, const DirectionalSample& b) {
  if (a.kappa != b.kappa) return a.kappa > b.kappa;
  return a.index < b.index;
}

inline double weighted_mean_kappa(const std::vector<DirectionalSample>& slice) {
  double num = 0.0;
  double den = 0.0;
  for (const DirectionalSample& s : slice) {
    num += s.kappa * s.w;
    den += s.w;
  }
  if (!(den > 0.0))
    fail(Errc::DegenerateWeights, "principal_from_samples: extreme slice has zero weight");
  return num / den;
}

/// Weighted average of the slice's chord directions, each flipped to share a
/// half-space with the slice's leading direction (chords are axial: T and -T
/// carry the same curvature), projected into the tangent plane.
inline Eigen::Vector3d slice_direction(const std::vector<DirectionalSample>& slice,
                                       const LocalFrame& frame,
                                       const Eigen::Vector3d& fallback, bool& used_fallback) {
  const Eigen::Vector3d ref = slice.front().v / slice.front().v.norm();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const DirectionalSample& s : slice) {
    Eigen::Vector3d u = s.v / s.v.norm();
    if (ref.dot(u) < 0.0) u = -u;
    sum += s.w * u;
  }
  const Eigen::Vector3d tangent = frame.e1 * frame.e1.dot(sum) + frame.e2 * frame.e2.dot(sum);
  const double len = tangent.norm();
  if (len <= 1e-10) {
    used_fallback = true;
    return fallback;
  }
  return tangent / len;
}

struct PrincipalPair {
  double kappa1;
  double kappa2;
  Eigen::Vector3d d1;
  Eigen::Vector3d d2;
  bool direction_fallback = false;
};

inline PrincipalPair principal_pair(const std::vector<DirectionalSample>& samples,
                                    const LocalFrame& frame, const CurvatureConfig& config) {
  if (samples.empty()) fail(Errc::EmptyInput, "principal_from_samples: no samples");
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(config.extreme_fraction * samples.size())));
  std::vector<DirectionalSample> low(samples);
  std::partial_sort(low.begin(), low.begin() + k, low.end(), kappa_ascending);
  low.resize(k);
  std::vector<DirectionalSample> high(samples);
  std::partial_sort(high.begin(), high.begin() + k, high.end(), kappa_descending);
  high.resize(k);

  const double kappa_low = weighted_mean_kappa(low);
  const double kappa_high = weighted_mean_kappa(high);

  PrincipalPair out;
  out.kappa1 = std::max(kappa_high, kappa_low);
  out.kappa2 = std::min(kappa_high, kappa_low);
  const std::vector<DirectionalSample>& slice1 = kappa_high >= kappa_low ? high : low;
  const std::vector<DirectionalSample>& slice2 = kappa_high >= kappa_low ? low : high;
  out.d1 = slice_direction(slice1, frame, frame.e1, out.direction_fallback);
  out.d2 = slice_direction(slice2, frame, frame.e2, out.direction_fallback);
  return out;
}

}  // namespace detail

/// One curvature sample per point of the tau-neighborhood of p, using the
/// oriented frame normal.
inline std::vector<DirectionalSample> directional_samples(const PointCloud& cloud,
                                                          const Point3& p,
                                                          const LocalFrame& frame, double tau,
                                                          const Kernel& kernel,
                                                          int min_tau_neighbors = 10) {
  const std::vector<detail::NeighborRec> recs = detail::sorted_neighbors(cloud, p, tau);
  return detail::samples_from_sorted(cloud, p, frame, recs, recs.size(), tau, kernel,
                                     min_tau_neighbors);
}

/// Average the extreme fraction of the directional curvatures into the
/// principal pair. The top slice yields kappa1 (the highest directional
/// curvature), the bottom slice kappa2; each slice's weighted chord average,
/// projected into the tangent plane, gives the matching principal direction.
inline detail::PrincipalPair principal_from_samples(
    const std::vector<DirectionalSample>& samples, const LocalFrame& frame,
    const CurvatureConfig& config) {
  config.validate();
  return detail::principal_pair(samples, frame, config);
}

namespace detail {

inline CurvatureResult estimate_point_impl(const PointCloud& cloud, const Point3& p,
                                           const SweepConfig& sweep,
                                           const CurvatureConfig& curvature) {
  CurvatureResult result;
  try {
    const double r_max = sweep.max_radius_factor * cloud.delta();
    if (!(r_max > 0.0))
      fail(Errc::NoUsableScale, "variance_profile: data bound is zero, no sweep grid exists");
    const std::vector<NeighborRec> recs = sorted_neighbors(cloud, p, r_max);
    const VarianceProfile profile =
        profile_from_sorted(cloud, p, recs, sweep, curvature.kernel);
    const ScalePair scales = select_scales(profile, sweep.gamma);
    result.eps_pca = scales.eps_pca;
    result.tau = scales.tau;

    const auto prefix_count = [&](double r) {
      const auto end = std::lower_bound(
          recs.begin(), recs.end(), r,
          [](const NeighborRec& rec, double radius) { return rec.dist < radius; });
      return static_cast<std::size_t>(end - recs.begin());
    };

    const std::size_t eps_count = prefix_count(scales.eps_pca);
    LocalFrame frame =
        frame_from_sorted(cloud, p, recs, eps_count, scales.eps_pca, curvature.kernel);
    frame = orient_normal(frame, p, centroid_of_sorted(cloud, recs, eps_count));

    const std::size_t tau_count = prefix_count(scales.tau);
    const std::vector<DirectionalSample> samples =
        samples_from_sorted(cloud, p, frame, recs, tau_count, scales.tau, curvature.kernel,
                            curvature.min_tau_neighbors);
    const PrincipalPair pair = principal_pair(samples, frame, curvature);

    result.kappa1 = pair.kappa1;
    result.kappa2 = pair.kappa2;
    result.gauss = pair.kappa1 * pair.kappa2;
    result.mean = pair.kappa1 + pair.kappa2;
    result.d1 = pair.d1;
    result.d2 = pair.d2;
    result.normal = frame.n;
    result.direction_fallback = pair.direction_fallback;
    result.valid = true;
  } catch (const Error&) {
    // Per-point failure (sparse, degenerate or unusable neighborhood):
    // the point is flagged invalid, the batch continues.
    result.valid = false;
  }
  return result;
}

}  // namespace detail

/// Full per-point pipeline: radius sweep, scale selection, oriented tangent
/// frame at eps_pca, directional samples at tau, principal extraction.
/// Failures degrade to an invalid result rather than an exception.
inline CurvatureResult estimate_point(const PointCloud& cloud, const Point3& p,
                                      const SweepConfig& sweep,
                                      const CurvatureConfig& curvature) {
  sweep.validate();
  curvature.validate();
  return detail::estimate_point_impl(cloud, p, sweep, curvature);
}

/// Estimate every cloud point, in input order. Points are independent, so the
/// batch is distributed over `threads` workers (0 = available parallelism);
/// results are identical for every worker count.
inline std::vector<CurvatureResult> estimate_all(const PointCloud& cloud,
                                                 const SweepConfig& sweep,
                                                 const CurvatureConfig& curvature,
                                                 unsigned threads = 0) {
  sweep.validate();
  curvature.validate();
  std::vector<CurvatureResult> results(cloud.size());
  parallel_for(cloud.size(), threads, [&](std::size_t i) {
    results[i] = detail::estimate_point_impl(cloud, cloud[i], sweep, curvature);
  });
  return results;
}

/// Re-express a result in the orientation of a reference normal: when the
/// estimate's normal opposes the reference, both principal curvatures flip
/// sign, which swaps their order and with it the direction labels. Gaussian
/// curvature is unaffected. Used when comparing signed quantities against
/// ground truth whose orientation convention is fixed.
inline CurvatureResult align_to_reference_normal(CurvatureResult result,
                                                 const Eigen::Vector3d& reference_normal) {
  if (!result.valid) return result;
  if (result.normal.dot(reference_normal) >= 0.0) return result;
  CurvatureResult flipped = result;
  flipped.kappa1 = -result.kappa2;
  flipped.kappa2 = -result.kappa1;
  flipped.mean = -result.mean;
  flipped.d1 = result.d2;
  flipped.d2 = result.d1;
  flipped.normal = -result.normal;
  return flipped;
}

}  // namespace adacurv
