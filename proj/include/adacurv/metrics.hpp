#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "adacurv/curvature.hpp"
#include "adacurv/surfaces.hpp"

namespace adacurv {

namespace detail {

inline void require_finite_values(const std::vector<double>& values, const char* who) {
  for (double v : values)
    if (!std::isfinite(v)) fail(Errc::InvalidValue, std::string(who) + ": non-finite value");
}

inline void require_same_shape(const std::vector<double>& a, const std::vector<double>& b,
                               const char* who) {
  if (a.size() != b.size())
    fail(Errc::ShapeMismatch, std::string(who) + ": input lengths differ");
  if (a.empty()) fail(Errc::EmptyInput, std::string(who) + ": empty input");
}

/// sum_{i<j} |x_i - x_j| over a sorted vector, via prefix sums.
inline double sorted_pair_distance_sum(const std::vector<double>& sorted) {
  double total = 0.0;
  double prefix = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += static_cast<double>(i) * sorted[i] - prefix;
    prefix += sorted[i];
  }
  return total;
}

/// sum over all pairs |a_i - b_j| for sorted a and b, by merging: for each b_j,
/// split a into the part below (contributes b_j*k - sum) and above.
inline double sorted_cross_distance_sum(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  std::vector<double> prefix(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) prefix[i + 1] = prefix[i] + a[i];
  const double total_a = prefix[a.size()];
  double total = 0.0;
  for (double bj : b) {
    const auto it = std::upper_bound(a.begin(), a.end(), bj);
    const std::size_t k = static_cast<std::size_t>(it - a.begin());
    const double below = prefix[k];
    total += bj * static_cast<double>(k) - below;
    total += (total_a - below) - bj * static_cast<double>(a.size() - k);
  }
  return total;
}

}  // namespace detail

inline double rmse(const std::vector<double>& estimate, const std::vector<double>& truth) {
  detail::require_same_shape(estimate, truth, "rmse");
  detail::require_finite_values(estimate, "rmse");
  detail::require_finite_values(truth, "rmse");
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - truth[i];
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(estimate.size()));
}

/// Squared energy distance between the empirical distributions of a and b:
///   D^2 = 2 E|A - B| - E|A - A'| - E|B - B'|
/// with A, A' (resp. B, B') independent copies, computed exactly with the
/// V-statistic (divisors n*m, n^2, m^2) in O(n log n) after sorting and
/// clamped at zero. The squared form D^2 is what every report carries. Unlike
/// RMSE this ignores pairing, so it measures distributional agreement only.
inline double energy_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) fail(Errc::EmptyInput, "energy_distance: empty input");
  detail::require_finite_values(a, "energy_distance");
  detail::require_finite_values(b, "energy_distance");
  std::vector<double> sa = a;
  std::vector<double> sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n = static_cast<double>(sa.size());
  const double m = static_cast<double>(sb.size());
  const double cross = detail::sorted_cross_distance_sum(sa, sb) / (n * m);
  const double within_a = 2.0 * detail::sorted_pair_distance_sum(sa) / (n * n);
  const double within_b = 2.0 * detail::sorted_pair_distance_sum(sb) / (m * m);
  const double d_sq = 2.0 * cross - within_a - within_b;
  return std::max(0.0, d_sq);
}

/// Pearson correlation. A constant input has no defined correlation and
/// raises UndefinedCorrelation.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  detail::require_same_shape(a, b, "pearson");
  detail::require_finite_values(a, "pearson");
  detail::require_finite_values(b, "pearson");
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0)
    fail(Errc::UndefinedCorrelation, "pearson: an input is constant");
  return cov / std::sqrt(var_a * var_b);
}

/// One row of the benchmark metrics table.
struct MetricReport {
  std::string surface;
  double noise_sigma = 0.0;
  std::string quantity;  // "gauss", "mean_sum", or "mean_half"
  double rmse = 0.0;
  double energy_distance = 0.0;
  double pearson = 0.0;  // NaN when the correlation is undefined
  int n_valid = 0;
  int n_total = 0;
  std::uint64_t seed = 0;
};

/// Paired (estimate, truth) values for one quantity of one run, for scatter
/// output. Only points with a valid estimate appear.
struct ScatterColumn {
  std::vector<double> estimate;
  std::vector<double> truth;
};

struct BenchmarkRun {
  std::vector<GroundTruthPoint> samples;
  std::vector<CurvatureResult> estimates;  // gauge-aligned to the true normals
  std::vector<MetricReport> reports;
  ScatterColumn gauss;
  ScatterColumn mean_sum;
};

/// Sample a surface, perturb it, estimate curvature on the noisy cloud, and
/// compare against the clean analytic truth. Estimates are re-expressed in
/// the gauge of the analytic normal before any sign-sensitive comparison,
/// since the estimator's local orientation choice is arbitrary. Metrics use
/// only points whose estimate is valid. Reported quantities:
///   gauss      estimated vs true Gaussian curvature
///   mean_sum   estimated kappa1 + kappa2 vs true 2H
///   mean_half  estimated (kappa1 + kappa2) / 2 vs true H
inline BenchmarkRun run_benchmark_job(const SurfaceSpec& spec, int n, double sigma,
                                      std::uint64_t seed, const SweepConfig& sweep,
                                      const CurvatureConfig& curvature, int threads = 0) {
  BenchmarkRun run;
  run.samples = sample_surface(spec, n, seed);
  add_noise(run.samples, sigma, seed);

  std::vector<Point3> noisy(run.samples.size());
  for (std::size_t i = 0; i < run.samples.size(); ++i)
    noisy[i] = run.samples[i].noisy_position;
  const PointCloud cloud = build_cloud(noisy);
  run.estimates = estimate_all(cloud, sweep, curvature, threads);
  for (std::size_t i = 0; i < run.estimates.size(); ++i)
    run.estimates[i] = align_to_reference_normal(run.estimates[i], run.samples[i].normal);

  std::vector<double> est_gauss, true_gauss, est_sum, true_sum;
  int n_valid = 0;
  for (std::size_t i = 0; i < run.estimates.size(); ++i) {
    const CurvatureResult& r = run.estimates[i];
    if (!r.valid) continue;
    ++n_valid;
    est_gauss.push_back(r.gauss);
    true_gauss.push_back(run.samples[i].gauss);
    est_sum.push_back(r.mean);
    true_sum.push_back(2.0 * run.samples[i].mean);
  }
  run.gauss = ScatterColumn{est_gauss, true_gauss};
  run.mean_sum = ScatterColumn{est_sum, true_sum};

  const int n_total = static_cast<int>(run.estimates.size());
  auto report = [&](const char* quantity, const std::vector<double>& est,
                    const std::vector<double>& truth) {
    MetricReport rep;
    rep.surface = spec.name();
    rep.noise_sigma = sigma;
    rep.quantity = quantity;
    rep.n_valid = n_valid;
    rep.n_total = n_total;
    rep.seed = seed;
    if (est.empty()) {
      rep.rmse = std::numeric_limits<double>::quiet_NaN();
      rep.energy_distance = std::numeric_limits<double>::quiet_NaN();
      rep.pearson = std::numeric_limits<double>::quiet_NaN();
    } else {
      rep.rmse = rmse(est, truth);
      rep.energy_distance = energy_distance(est, truth);
      try {
        rep.pearson = pearson(est, truth);
      } catch (const Error&) {
        rep.pearson = std::numeric_limits<double>::quiet_NaN();
      }
    }
    run.reports.push_back(std::move(rep));
  };
  report("gauss", est_gauss, true_gauss);
  report("mean_sum", est_sum, true_sum);

  std::vector<double> est_half(est_sum.size());
  std::vector<double> true_half(true_sum.size());
  for (std::size_t i = 0; i < est_sum.size(); ++i) {
    est_half[i] = 0.5 * est_sum[i];
    true_half[i] = 0.5 * true_sum[i];
  }
  report("mean_half", est_half, true_half);
  return run;
}

}  // namespace adacurv
