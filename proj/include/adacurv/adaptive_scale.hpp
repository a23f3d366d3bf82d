#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "adacurv/local_frame.hpp"

namespace adacurv {

/// Parameters of the per-point radius sweep.
struct SweepConfig {
  double gamma = 0.9;              // explained-variance threshold in (0,1)
  int grid_size = 40;              // number of radii in the sweep grid
  double max_radius_factor = 0.2;  // sweep covers (0, max_radius_factor * delta]
  int min_neighbors = 10;          // fewer neighbors marks a grid entry invalid

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
      fail(Errc::InvalidArgument, "SweepConfig: gamma must lie in (0,1)");
    if (grid_size < 2) fail(Errc::InvalidArgument, "SweepConfig: grid_size must be >= 2");
    if (!(max_radius_factor > 0.0 && max_radius_factor <= 1.0))
      fail(Errc::InvalidArgument, "SweepConfig: max_radius_factor must lie in (0,1]");
    if (min_neighbors < 0)
      fail(Errc::InvalidArgument, "SweepConfig: min_neighbors must be >= 0");
  }
};

/// Explained-variance-ratio curve r -> rho(r) over the sweep grid. Entries
/// with too few neighbors or a degenerate neighborhood are marked invalid.
struct VarianceProfile {
  std::vector<double> radii;  // strictly increasing
  std::vector<double> rho;    // in [0,1] wherever valid
  std::vector<char> valid;
};

/// The two scales a point's sweep selects: eps_pca drives the tangent-frame
/// PCA, tau the curvature sampling. Both lie on the sweep grid.
struct ScalePair {
  double eps_pca = 0.0;
  double tau = 0.0;
  bool fallback_used = false;
};

namespace detail {

inline double rho_from_lambda(const std::array<double, 3>& lambda) {
  // lambda descending; rho = (sigma1^2 + sigma2^2) / (sigma1^2 + sigma2^2 + sigma3^2).
  return (lambda[0] + lambda[1]) / (lambda[0] + lambda[1] + lambda[2]);
}

inline VarianceProfile profile_from_sorted(const PointCloud& cloud, const Point3& p,
                                           const std::vector<NeighborRec>& recs,
                                           const SweepConfig& config, const Kernel& kernel) {
  const double r_max = config.max_radius_factor * cloud.delta();
  VarianceProfile profile;
  if (!(r_max > 0.0))
    fail(Errc::NoUsableScale, "variance_profile: data bound is zero, no sweep grid exists");
  const std::size_t min_count =
      static_cast<std::size_t>(std::max(3, config.min_neighbors));
  profile.radii.resize(config.grid_size);
  profile.rho.assign(config.grid_size, 0.0);
  profile.valid.assign(config.grid_size, 0);
  bool any_valid = false;
  for (int k = 0; k < config.grid_size; ++k) {
    const double r = r_max * static_cast<double>(k + 1) / config.grid_size;
    profile.radii[k] = r;
    // Neighborhood of radius r is the prefix of the (distance, index)-sorted
    // records with dist < r, so each entry matches a standalone PCA at r.
    const auto end = std::lower_bound(
        recs.begin(), recs.end(), r,
        [](const NeighborRec& rec, double radius) { return rec.dist < radius; });
    const std::size_t count = static_cast<std::size_t>(end - recs.begin());
    if (count < min_count) continue;
    double weight_sum = 0.0;
    const Eigen::Matrix3d m = weighted_moment(cloud, p, recs, count, r, kernel, weight_sum);
    if (!(weight_sum > 0.0)) continue;
    const MomentEigen eig = moment_eigen(m, false);
    const double sigma1 = std::sqrt(eig.lambda[0]);
    const double sigma2 = std::sqrt(eig.lambda[1]);
    if (!(sigma1 > 0.0) || sigma2 < kRankTolerance * sigma1) continue;
    profile.rho[k] = rho_from_lambda(eig.lambda);
    profile.valid[k] = 1;
    any_valid = true;
  }
  if (!any_valid)
    fail(Errc::NoUsableScale, "variance_profile: no grid radius yields a usable neighborhood");
  return profile;
}

}  // namespace detail

/// Sweep the radius grid r_k = k * max_radius_factor * delta / grid_size,
/// k = 1..grid_size, computing rho(r) from the kernel-weighted PCA at each
/// valid radius. Throws NoUsableScale when no grid entry is usable.
inline VarianceProfile variance_profile(const PointCloud& cloud, const Point3& p,
                                        const SweepConfig& config, const Kernel& kernel) {
  config.validate();
  const double r_max = config.max_radius_factor * cloud.delta();
  if (!(r_max > 0.0))
    fail(Errc::NoUsableScale, "variance_profile: data bound is zero, no sweep grid exists");
  const std::vector<detail::NeighborRec> recs = detail::sorted_neighbors(cloud, p, r_max);
  return detail::profile_from_sorted(cloud, p, recs, config, kernel);
}

/// Pick the scales from a profile:
///   eps_pca = largest valid radius with rho(r) > gamma,
///   tau     = valid radius minimising rho (smallest such radius on ties).
/// When no radius clears gamma, eps_pca falls back to the smallest valid
/// radius and fallback_used is set.
inline ScalePair select_scales(const VarianceProfile& profile, double gamma) {
  ScalePair out;
  int eps_idx = -1;
  int tau_idx = -1;
  int first_valid = -1;
  for (std::size_t k = 0; k < profile.radii.size(); ++k) {
    if (!profile.valid[k]) continue;
    if (first_valid < 0) first_valid = static_cast<int>(k);
    if (profile.rho[k] > gamma) eps_idx = static_cast<int>(k);
    if (tau_idx < 0 || profile.rho[k] < profile.rho[tau_idx]) tau_idx = static_cast<int>(k);
  }
  if (first_valid < 0)
    fail(Errc::NoUsableScale, "select_scales: profile has no valid entry");
  if (eps_idx < 0) {
    eps_idx = first_valid;
    out.fallback_used = true;
  }
  out.eps_pca = profile.radii[eps_idx];
  out.tau = profile.radii[tau_idx];
  return out;
}

}  // namespace adacurv
