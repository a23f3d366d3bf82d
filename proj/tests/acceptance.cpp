// Acceptance gate: ten numbered criteria covering end-to-end accuracy,
// robustness trends, invariances, oracle agreement, and byte-level
// reproducibility, evaluated at the pinned default configuration.  Each
// criterion prints exactly one [PASS]/[FAIL] line with the measured values;
// the exit code is the number of failed criteria.
//
// Criteria that measure estimator accuracy are reported exactly as measured.
// A [FAIL] here means the pinned algorithm at the pinned surface scales does
// not reach the target, not that the gate was loosened to hide it.

#include <sys/types.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <adacurv/commands.hpp>
#include <adacurv/metrics.hpp>

#include "support/oracles.hpp"

namespace fs = std::filesystem;
using adacurv::BenchmarkRun;
using adacurv::CurvatureConfig;
using adacurv::CurvatureResult;
using adacurv::MetricReport;
using adacurv::Point3;
using adacurv::PointCloud;
using adacurv::SurfaceSpec;
using adacurv::SweepConfig;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

std::string fmt_list(const std::vector<double>& values, int digits = 3) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(values[i], digits);
  }
  return out + "}";
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double spread_of(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

bool bits_equal(double a, double b) {
  std::uint64_t ua = 0, ub = 0;
  std::memcpy(&ua, &a, sizeof(a));
  std::memcpy(&ub, &b, sizeof(b));
  return ua == ub;
}

const MetricReport& report_for(const BenchmarkRun& run, const std::string& quantity) {
  for (const MetricReport& r : run.reports)
    if (r.quantity == quantity) return r;
  throw std::runtime_error("missing report quantity " + quantity);
}

// All benchmark-style criteria share one pinned protocol: default estimator
// configuration, 5000 samples, seeds {1,2,3}.
constexpr int kPoints = 5000;
const std::vector<std::uint64_t> kSeeds = {1, 2, 3};

struct TimedRun {
  BenchmarkRun run;
  double seconds = 0.0;
};

// Cache keyed by (surface name, sigma, seed); every criterion that needs the
// same job reuses the first execution (results are thread-count invariant).
std::map<std::tuple<std::string, double, std::uint64_t>, TimedRun> g_jobs;

const TimedRun& job(const SurfaceSpec& spec, double sigma, std::uint64_t seed,
                    int threads = 0) {
  const auto key = std::make_tuple(std::string(spec.name()), sigma, seed);
  auto it = g_jobs.find(key);
  if (it != g_jobs.end()) return it->second;
  TimedRun timed;
  const auto t0 = std::chrono::steady_clock::now();
  timed.run = adacurv::run_benchmark_job(spec, kPoints, sigma, seed, SweepConfig{},
                                         CurvatureConfig{}, threads);
  const auto t1 = std::chrono::steady_clock::now();
  timed.seconds = std::chrono::duration<double>(t1 - t0).count();
  return g_jobs.emplace(key, std::move(timed)).first->second;
}

// --- criterion 1: torus noiseless accuracy and runtime --------------------

void criterion_1() {
  std::vector<double> pearsons, rmses, times;
  bool pass = true;
  for (std::uint64_t seed : kSeeds) {
    const TimedRun& timed = job(SurfaceSpec::torus(), 0.0, seed, /*threads=*/1);
    const MetricReport& gauss = report_for(timed.run, "gauss");
    pearsons.push_back(gauss.pearson);
    rmses.push_back(gauss.rmse);
    times.push_back(timed.seconds);
    pass = pass && gauss.pearson >= 0.95 && gauss.rmse <= 1.0 && timed.seconds <= 120.0;
  }
  report(1, "torus noiseless gauss accuracy (pearson >= 0.95, rmse <= 1.0, <= 120 s, every seed)",
         pass,
         "pearson " + fmt_list(pearsons) + ", rmse " + fmt_list(rmses) + ", seconds " +
             fmt_list(times, 1));
}

// --- criterion 2: ellipsoid noiseless correlation --------------------------

void criterion_2() {
  std::vector<double> pearsons;
  bool pass = true;
  for (std::uint64_t seed : kSeeds) {
    const MetricReport& gauss = report_for(job(SurfaceSpec::ellipsoid(), 0.0, seed).run, "gauss");
    pearsons.push_back(gauss.pearson);
    pass = pass && gauss.pearson >= 0.90;
  }
  report(2, "ellipsoid noiseless gauss correlation (pearson >= 0.90, every seed)", pass,
         "pearson " + fmt_list(pearsons));
}

// --- criterion 3: saddle noiseless accuracy --------------------------------

void criterion_3() {
  std::vector<double> pearsons, rmses;
  bool pass = true;
  for (std::uint64_t seed : kSeeds) {
    const MetricReport& gauss =
        report_for(job(SurfaceSpec::hyperbolic_paraboloid(), 0.0, seed).run, "gauss");
    pearsons.push_back(gauss.pearson);
    rmses.push_back(gauss.rmse);
    pass = pass && gauss.rmse <= 0.6 && gauss.pearson >= 0.60;
  }
  report(3, "saddle noiseless gauss accuracy (rmse <= 0.6, pearson >= 0.60, every seed)", pass,
         "rmse " + fmt_list(rmses) + ", pearson " + fmt_list(pearsons));
}

// --- criterion 4: noise degradation trend on the torus ---------------------

void criterion_4() {
  const std::vector<double> sigmas = {0.0, 0.1, 0.2, 0.3};
  std::vector<double> mean_rmse, spread, mean_pearson;
  for (double sigma : sigmas) {
    std::vector<double> rmses, pearsons;
    for (std::uint64_t seed : kSeeds) {
      const MetricReport& gauss = report_for(job(SurfaceSpec::torus(), sigma, seed).run, "gauss");
      rmses.push_back(gauss.rmse);
      pearsons.push_back(gauss.pearson);
    }
    mean_rmse.push_back(mean_of(rmses));
    spread.push_back(spread_of(rmses));
    mean_pearson.push_back(mean_of(pearsons));
  }
  const bool bounded_growth = mean_rmse[1] <= 2.5 * mean_rmse[0] + 1.0;
  bool non_decreasing = true;
  for (std::size_t k = 0; k + 1 < sigmas.size(); ++k)
    non_decreasing = non_decreasing && mean_rmse[k + 1] >= mean_rmse[k] - spread[k];
  const bool correlated = mean_pearson[1] >= 0.70;
  report(4,
         "torus noise trend (rmse@0.1 <= 2.5x rmse@0 + 1.0; seed-averaged rmse non-decreasing "
         "0->0.3 within one seed-spread; pearson@0.1 >= 0.70)",
         bounded_growth && non_decreasing && correlated,
         "seed-averaged rmse " + fmt_list(mean_rmse) + " at sigma {0, 0.1, 0.2, 0.3}, "
             "seed-averaged pearson@0.1 " +
             fmt(mean_pearson[1]));
}

// --- criterion 5: constant-curvature oracle --------------------------------

void criterion_5() {
  std::vector<double> sphere_gauss, plane_abs_gauss;
  for (const CurvatureResult& r : job(SurfaceSpec::sphere(), 0.0, 1).run.estimates)
    if (r.valid) sphere_gauss.push_back(r.gauss);
  for (const CurvatureResult& r : job(SurfaceSpec::plane(), 0.0, 1).run.estimates)
    if (r.valid) plane_abs_gauss.push_back(std::abs(r.gauss));
  const double sphere_median = median(sphere_gauss);
  const double plane_median = median(plane_abs_gauss);
  const bool pass = std::abs(sphere_median - 1.0) <= 0.10 && plane_median <= 0.05;
  report(5, "constant-curvature oracle (unit sphere median K within 10% of 1; plane median |K| <= 0.05)",
         pass,
         "sphere median K " + fmt(sphere_median, 4) + ", plane median |K| " +
             fmt(plane_median, 5));
}

// --- criterion 6: mean-curvature fidelity -----------------------------------

void criterion_6() {
  bool pass = true;
  std::string detail;
  for (const SurfaceSpec& spec : {SurfaceSpec::torus(), SurfaceSpec::ellipsoid(),
                                  SurfaceSpec::hyperbolic_paraboloid()}) {
    std::vector<double> best;
    for (std::uint64_t seed : kSeeds) {
      const BenchmarkRun& run = job(spec, 0.0, seed).run;
      const double sum_form = report_for(run, "mean_sum").pearson;
      const double half_form = report_for(run, "mean_half").pearson;
      best.push_back(std::max(sum_form, half_form));
    }
    for (double p : best) pass = pass && p >= 0.85;
    if (!detail.empty()) detail += "; ";
    detail += std::string(spec.name()) + " " + fmt_list(best);
  }
  report(6, "mean-curvature fidelity (better H convention pearson >= 0.85, every surface and seed)",
         pass, detail);
}

// --- criterion 7: principal directions on the saddle ------------------------

void criterion_7() {
  const double max_angle_deg = 15.0;
  std::vector<double> fractions;
  bool pass = true;
  int near_total = 0;
  for (std::uint64_t seed : kSeeds) {
    const BenchmarkRun& run = job(SurfaceSpec::hyperbolic_paraboloid(), 0.0, seed).run;
    int near = 0, good = 0;
    for (std::size_t i = 0; i < run.estimates.size(); ++i) {
      const CurvatureResult& est = run.estimates[i];
      if (!est.valid || run.samples[i].position.norm() > 0.2) continue;
      ++near;
      const double angle1 =
          std::acos(std::min(1.0, std::abs(est.d1.normalized().x()))) * 180.0 / M_PI;
      const double angle2 =
          std::acos(std::min(1.0, std::abs(est.d2.normalized().y()))) * 180.0 / M_PI;
      if (angle1 <= max_angle_deg && angle2 <= max_angle_deg) ++good;
    }
    near_total += near;
    const double fraction = near > 0 ? static_cast<double>(good) / near : 0.0;
    fractions.push_back(fraction);
    pass = pass && near > 0 && fraction >= 0.90;
  }
  report(7,
         "saddle principal directions near the origin (d1 within 15 deg of x, d2 of y, >= 90% "
         "of valid points, every seed)",
         pass,
         "aligned fraction " + fmt_list(fractions) + " over " + std::to_string(near_total) +
             " near-origin points");
}

// --- criterion 8: invariance suite ------------------------------------------

void criterion_8() {
  const auto samples = adacurv::sample_surface(SurfaceSpec::torus(), 2000, 1);
  std::vector<Point3> base(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) base[i] = samples[i].position;

  const SweepConfig sweep;
  const CurvatureConfig curv;
  const PointCloud cloud = adacurv::build_cloud(base);
  const auto reference = adacurv::estimate_all(cloud, sweep, curv, 1);

  // Rigid motion: same kappas and gauss up to 1e-6 relative.
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.83, Eigen::Vector3d(0.3, -0.5, 0.8).normalized()).toRotationMatrix();
  const Point3 shift(0.4, -0.7, 0.25);
  std::vector<Point3> moved(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) moved[i] = rot * base[i] + shift;
  const auto moved_results = adacurv::estimate_all(adacurv::build_cloud(moved), sweep, curv, 1);
  double worst_rigid = 0.0;
  bool masks_match = true;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    masks_match = masks_match && reference[i].valid == moved_results[i].valid;
    if (!reference[i].valid || !moved_results[i].valid) continue;
    for (auto [a, b] : {std::pair{reference[i].kappa1, moved_results[i].kappa1},
                        std::pair{reference[i].kappa2, moved_results[i].kappa2},
                        std::pair{reference[i].gauss, moved_results[i].gauss}})
      worst_rigid = std::max(worst_rigid, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  const bool rigid_ok = masks_match && worst_rigid <= 1e-6;

  // Uniform scaling by 2 keeps the sweep grid aligned, so K must scale by 1/4.
  std::vector<Point3> doubled(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) doubled[i] = 2.0 * base[i];
  const auto scaled_results =
      adacurv::estimate_all(adacurv::build_cloud(doubled), sweep, curv, 1);
  double worst_scale = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (!reference[i].valid || !scaled_results[i].valid) continue;
    worst_scale = std::max(worst_scale, std::abs(scaled_results[i].gauss * 4.0 -
                                                 reference[i].gauss) /
                                            std::max(1.0, std::abs(reference[i].gauss)));
  }
  const bool scale_ok = worst_scale <= 1e-8;

  // Flipping the orientation gauge must leave K untouched.
  double worst_flip = 0.0;
  for (const CurvatureResult& r : reference) {
    if (!r.valid) continue;
    const CurvatureResult flipped = adacurv::align_to_reference_normal(r, -r.normal);
    worst_flip = std::max(worst_flip, std::abs(flipped.gauss - r.gauss));
  }
  const bool flip_ok = worst_flip <= 1e-12;

  // Parallel execution must be bit-identical to sequential.
  const auto parallel = adacurv::estimate_all(cloud, sweep, curv, 4);
  bool parallel_ok = parallel.size() == reference.size();
  for (std::size_t i = 0; parallel_ok && i < reference.size(); ++i) {
    const CurvatureResult& a = reference[i];
    const CurvatureResult& b = parallel[i];
    parallel_ok = a.valid == b.valid && bits_equal(a.kappa1, b.kappa1) &&
                  bits_equal(a.kappa2, b.kappa2) && bits_equal(a.gauss, b.gauss) &&
                  bits_equal(a.mean, b.mean) && bits_equal(a.eps_pca, b.eps_pca) &&
                  bits_equal(a.tau, b.tau);
    for (int c = 0; parallel_ok && c < 3; ++c)
      parallel_ok = bits_equal(a.d1[c], b.d1[c]) && bits_equal(a.d2[c], b.d2[c]) &&
                    bits_equal(a.normal[c], b.normal[c]);
  }

  report(8,
         "invariance suite (rigid 1e-6, K scale equivariance 1e-8, gauge flip 1e-12, "
         "parallel bit-identity)",
         rigid_ok && scale_ok && flip_ok && parallel_ok,
         "rigid worst " + fmt(worst_rigid, 9) + ", scale worst " + fmt(worst_scale, 11) +
             ", flip worst " + fmt(worst_flip, 14) + ", parallel " +
             (parallel_ok ? "bit-identical" : "MISMATCH"));
}

// --- criterion 9: unit oracles ----------------------------------------------

void criterion_9() {
  // Hand-checked metric values.
  const bool rmse_ok = adacurv::rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0 &&
                       std::abs(adacurv::rmse({0.0, 0.0}, {3.0, 4.0}) - std::sqrt(12.5)) <= 1e-15;
  const bool energy_ok = adacurv::energy_distance({0.0, 0.0}, {1.0, 1.0}) == 2.0 &&
                         adacurv::energy_distance({0.0, 1.0}, {0.0, 1.0}) == 0.0 &&
                         adacurv::energy_distance({2.5, -1.0, 4.0}, {2.5, -1.0, 4.0}) == 0.0;
  const bool pearson_ok =
      std::abs(adacurv::pearson({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) - 1.0) <= 1e-12 &&
      std::abs(adacurv::pearson({1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}) + 1.0) <= 1e-12;

  // Fixed-radius search against brute force on 100 random queries.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Point3> box(3000);
  for (Point3& p : box) p = Point3(coord(rng), coord(rng), coord(rng));
  const PointCloud cloud = adacurv::build_cloud(box);
  std::uniform_real_distribution<double> radius(0.05, 0.6);
  bool neighbors_ok = true;
  for (int q = 0; q < 100 && neighbors_ok; ++q) {
    const Point3 query(coord(rng), coord(rng), coord(rng));
    const double r = radius(rng);
    auto got = adacurv::neighbors_within(cloud, query, r).indices;
    auto want = oracle::neighbors_brute(box, query, r);
    std::sort(got.begin(), got.end());
    neighbors_ok = got == want;
  }

  // Closed-form curvature against the finite-difference shape operator.
  struct Domain {
    SurfaceSpec spec;
    double u_lo, u_hi, v_lo, v_hi;
  };
  const double two_pi = 2.0 * M_PI;
  const std::vector<Domain> domains = {
      {SurfaceSpec::torus(), 0.0, two_pi, 0.0, two_pi},
      {SurfaceSpec::ellipsoid(), 0.0, two_pi, 0.05, M_PI - 0.05},
      {SurfaceSpec::hyperbolic_paraboloid(), -0.99, 0.99, -0.99, 0.99},
      {SurfaceSpec::sphere(), 0.0, two_pi, 0.05, M_PI - 0.05},
      {SurfaceSpec::plane(), -0.99, 0.99, -0.99, 0.99},
  };
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_fd = 0.0;
  for (const Domain& d : domains) {
    for (int trial = 0; trial < 1000; ++trial) {
      const double u = d.u_lo + (d.u_hi - d.u_lo) * u01(rng);
      const double v = d.v_lo + (d.v_hi - d.v_lo) * u01(rng);
      const auto truth = adacurv::analytic_curvature(d.spec, u, v);
      const oracle::ShapeOperatorTruth fd = oracle::shape_operator_fd(d.spec, u, v);
      const double mean_fd =
          fd.normal.dot(truth.normal) >= 0.0 ? fd.mean_half : -fd.mean_half;
      worst_fd = std::max(worst_fd, std::abs(truth.gauss - fd.gauss) /
                                        std::max(1.0, std::abs(fd.gauss)));
      worst_fd = std::max(worst_fd,
                          std::abs(truth.mean - mean_fd) / std::max(1.0, std::abs(mean_fd)));
    }
  }
  const bool fd_ok = worst_fd <= 1e-6;

  report(9,
         "unit oracles (metric hand values; radius search vs brute force x100; analytic "
         "curvature vs finite-difference shape operator at 1e-6 x1000 per surface)",
         rmse_ok && energy_ok && pearson_ok && neighbors_ok && fd_ok,
         std::string("metrics ") + (rmse_ok && energy_ok && pearson_ok ? "exact" : "MISMATCH") +
             ", neighbors " + (neighbors_ok ? "identical" : "MISMATCH") + ", curvature worst " +
             fmt(worst_fd, 10));
}

// --- criterion 10: byte-level reproducibility of file outputs ---------------

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_10() {
  std::mt19937_64 salt(std::random_device{}());
  const fs::path dir =
      fs::temp_directory_path() / ("adacurv_acceptance_" + std::to_string(salt() % 1000000000));
  fs::create_directories(dir);

  adacurv::GenerateOptions gen;
  gen.surface = "torus";
  gen.n = 2000;
  gen.sigma = 0.1;
  gen.seed = 7;
  gen.out = (dir / "gen_a.csv").string();
  adacurv::cmd_generate(gen);
  gen.out = (dir / "gen_b.csv").string();
  adacurv::cmd_generate(gen);
  const bool generate_ok = file_bytes(dir / "gen_a.csv") == file_bytes(dir / "gen_b.csv");

  adacurv::BenchmarkOptions bench;
  bench.surfaces = {"torus"};
  bench.noise_levels = {0.0};
  bench.seeds = {1};
  bench.n = 800;
  bench.est.threads = 1;
  bench.out_dir = (dir / "bench_a").string();
  adacurv::cmd_benchmark(bench);
  bench.est.threads = 3;  // different worker count, same bytes required
  bench.out_dir = (dir / "bench_b").string();
  adacurv::cmd_benchmark(bench);
  bool benchmark_ok = true;
  for (const char* name :
       {"benchmark_metrics.csv", "scatter_torus_sigma0_seed1.csv", "benchmark_report.md"})
    benchmark_ok =
        benchmark_ok && file_bytes(dir / "bench_a" / name) == file_bytes(dir / "bench_b" / name);

  std::error_code ec;
  fs::remove_all(dir, ec);
  report(10, "output reproducibility (generate and benchmark byte-identical across reruns and thread counts)",
         generate_ok && benchmark_ok,
         std::string("generate ") + (generate_ok ? "identical" : "DIFFERS") + ", benchmark " +
             (benchmark_ok ? "identical" : "DIFFERS"));
}

}  // namespace

int main() {
  using CriterionFn = void (*)();
  const std::vector<std::pair<int, CriterionFn>> criteria = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}};
  for (const auto& [number, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(number, "criterion aborted", false, e.what());
    }
  }
  std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
