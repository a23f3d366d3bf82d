#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "adacurv/csv.hpp"
#include "adacurv/metrics.hpp"
#include "adacurv/version.hpp"

namespace adacurv {

/// Estimator settings shared by the estimate and benchmark commands; field
/// names match the CLI flags. `threads` caps the worker pool and never
/// affects output bytes, so it is left out of reproducibility headers.
struct EstimatorOptions {
  double gamma = 0.9;
  double extreme_fraction = 0.2;
  std::string kernel = "gauss";
  double bandwidth = 0.4;
  int grid_size = 40;
  double max_radius_factor = 0.2;
  int min_neighbors = 10;
  int threads = 0;

  Kernel make_kernel() const {
    if (kernel == "gauss") return Kernel::truncated_gaussian(bandwidth);
    if (kernel == "epan") return Kernel::epanechnikov();
    fail(Errc::InvalidArgument, "unknown kernel: " + kernel + " (expected gauss or epan)");
  }
  SweepConfig sweep() const {
    SweepConfig cfg;
    cfg.gamma = gamma;
    cfg.grid_size = grid_size;
    cfg.max_radius_factor = max_radius_factor;
    cfg.min_neighbors = min_neighbors;
    cfg.validate();
    return cfg;
  }
  CurvatureConfig curvature() const {
    CurvatureConfig cfg;
    cfg.extreme_fraction = extreme_fraction;
    cfg.kernel = make_kernel();
    cfg.min_tau_neighbors = min_neighbors;
    cfg.validate();
    return cfg;
  }
  void echo(std::vector<std::pair<std::string, std::string>>& kv) const {
    kv.emplace_back("bandwidth", format_double(bandwidth));
    kv.emplace_back("extreme_fraction", format_double(extreme_fraction));
    kv.emplace_back("gamma", format_double(gamma));
    kv.emplace_back("grid_size", std::to_string(grid_size));
    kv.emplace_back("kernel", kernel);
    kv.emplace_back("max_radius_factor", format_double(max_radius_factor));
    kv.emplace_back("min_neighbors", std::to_string(min_neighbors));
  }
};

struct GenerateOptions {
  std::string surface = "torus";
  std::vector<double> params;  // empty = the surface's defaults
  int n = 5000;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  bool param_uniform = false;
  std::string out;
};

struct EstimateOptions {
  EstimatorOptions est;
  std::string input;
  std::string output;
};

struct BenchmarkOptions {
  EstimatorOptions est;
  std::vector<std::string> surfaces = {"torus", "ellipsoid", "saddle"};
  std::vector<double> noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int n = 5000;
  std::string out_dir = "benchmark_out";
};

inline SurfaceSpec make_surface(const std::string& name, const std::vector<double>& params) {
  const auto arity = [&](std::size_t k) {
    if (!params.empty() && params.size() != k)
      fail(Errc::InvalidSurface,
           name + " expects " + std::to_string(k) + " parameters, got " +
               std::to_string(params.size()));
    return params.empty();
  };
  if (name == "torus")
    return arity(2) ? SurfaceSpec::torus() : SurfaceSpec::torus(params[0], params[1]);
  if (name == "ellipsoid")
    return arity(3) ? SurfaceSpec::ellipsoid()
                    : SurfaceSpec::ellipsoid(params[0], params[1], params[2]);
  if (name == "saddle")
    return arity(3) ? SurfaceSpec::hyperbolic_paraboloid()
                    : SurfaceSpec::hyperbolic_paraboloid(params[0], params[1], params[2]);
  if (name == "sphere")
    return arity(1) ? SurfaceSpec::sphere() : SurfaceSpec::sphere(params[0]);
  if (name == "plane")
    return arity(1) ? SurfaceSpec::plane() : SurfaceSpec::plane(params[0]);
  fail(Errc::InvalidSurface, "unknown surface: " + name);
}

namespace detail {

/// Effective parameter values of a spec, for config echoing.
inline std::string surface_params(const SurfaceSpec& spec) {
  switch (spec.kind) {
    case SurfaceKind::Torus:
      return format_double(spec.p0) + "," + format_double(spec.p1);
    case SurfaceKind::Ellipsoid:
    case SurfaceKind::HyperbolicParaboloid:
      return format_double(spec.p0) + "," + format_double(spec.p1) + "," +
             format_double(spec.p2);
    case SurfaceKind::Sphere:
    case SurfaceKind::Plane:
      return format_double(spec.p0);
  }
  return std::string();
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

/// Reproducibility header: tool version, the command, then the effective
/// configuration as sorted key=value comment lines. `html` switches to
/// HTML-comment syntax for markdown output.
inline void write_header(std::ostream& out, const std::string& command,
                         std::vector<std::pair<std::string, std::string>> kv,
                         bool html = false) {
  std::sort(kv.begin(), kv.end());
  const char* open = html ? "<!-- " : "# ";
  const char* close = html ? " -->" : "";
  out << open << "adacurv " << kVersion << close << '\n';
  out << open << "command=" << command << close << '\n';
  for (const auto& [key, value] : kv) out << open << key << '=' << value << close << '\n';
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot open for writing: " + path);
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(Errc::IoError, "write failed: " + path);
}

}  // namespace detail

/// Sample a benchmark surface (optionally noisy) to CSV. Columns: the noisy
/// position x,y,z, the clean position, analytic Gaussian and mean curvature
/// (classical (kappa1+kappa2)/2 convention) and the unit normal at the clean
/// point.
inline void cmd_generate(const GenerateOptions& opt) {
  const SurfaceSpec spec = make_surface(opt.surface, opt.params);
  if (!(opt.sigma >= 0.0)) fail(Errc::InvalidArgument, "sigma must be >= 0");
  const SamplingMode mode =
      opt.param_uniform ? SamplingMode::ParamUniform : SamplingMode::AreaUniform;
  std::vector<GroundTruthPoint> samples = sample_surface(spec, opt.n, opt.seed, mode);
  add_noise(samples, opt.sigma, opt.seed);

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("surface", spec.name());
  kv.emplace_back("params", detail::surface_params(spec));
  kv.emplace_back("n", std::to_string(opt.n));
  kv.emplace_back("sigma", format_double(opt.sigma));
  kv.emplace_back("seed", std::to_string(opt.seed));
  kv.emplace_back("sampling", opt.param_uniform ? "param" : "area");

  std::ofstream out = detail::open_output(opt.out);
  detail::write_header(out, "generate", std::move(kv));
  out << "x,y,z,clean_x,clean_y,clean_z,gauss_true,mean_true,nx,ny,nz\n";
  for (const GroundTruthPoint& pt : samples) {
    out << format_double(pt.noisy_position.x()) << ',' << format_double(pt.noisy_position.y())
        << ',' << format_double(pt.noisy_position.z()) << ',' << format_double(pt.position.x())
        << ',' << format_double(pt.position.y()) << ',' << format_double(pt.position.z()) << ','
        << format_double(pt.gauss) << ',' << format_double(pt.mean) << ','
        << format_double(pt.normal.x()) << ',' << format_double(pt.normal.y()) << ','
        << format_double(pt.normal.z()) << '\n';
  }
  detail::finish_output(out, opt.out);
}

/// Run the estimator over an input CSV (any table with x,y,z columns) and
/// rewrite it with per-point results appended. Input cells pass through
/// byte-for-byte and row order is preserved; points the estimator cannot
/// handle get empty curvature cells and valid=0.
inline void cmd_estimate(const EstimateOptions& opt) {
  std::ifstream in(opt.input, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open for reading: " + opt.input);
  const CsvTable table = read_csv(in);
  const int cx = table.column("x");
  const int cy = table.column("y");
  const int cz = table.column("z");
  if (table.rows.empty()) fail(Errc::EmptyInput, "no data rows in " + opt.input);

  std::vector<Point3> points(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto parse_cell = [&](int col, const char* name) {
      double value = 0.0;
      if (!parse_double(table.rows[i][static_cast<std::size_t>(col)], value) ||
          !std::isfinite(value))
        fail(Errc::FormatError, "line " + std::to_string(table.row_lines[i]) +
                                    ": unparseable value in column " + name);
      return value;
    };
    points[i] = Point3(parse_cell(cx, "x"), parse_cell(cy, "y"), parse_cell(cz, "z"));
  }

  const PointCloud cloud = build_cloud(points);
  const std::vector<CurvatureResult> results =
      estimate_all(cloud, opt.est.sweep(), opt.est.curvature(), opt.est.threads);

  std::vector<std::pair<std::string, std::string>> kv;
  opt.est.echo(kv);
  std::ofstream out = detail::open_output(opt.output);
  detail::write_header(out, "estimate", std::move(kv));
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << ",kappa1,kappa2,gauss,mean,d1x,d1y,d1z,d2x,d2y,d2z,eps_pca,tau,valid\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t c = 0; c < table.rows[i].size(); ++c) {
      if (c) out << ',';
      out << table.rows[i][c];
    }
    const CurvatureResult& r = results[i];
    out << ',' << format_double(r.kappa1) << ',' << format_double(r.kappa2) << ','
        << format_double(r.gauss) << ',' << format_double(r.mean);
    for (int a = 0; a < 3; ++a) out << ',' << format_double(r.d1[a]);
    for (int a = 0; a < 3; ++a) out << ',' << format_double(r.d2[a]);
    out << ',' << format_double(r.eps_pca) << ',' << format_double(r.tau) << ','
        << (r.valid ? '1' : '0') << '\n';
  }
  detail::finish_output(out, opt.output);
}

namespace detail {

struct Aggregate {
  double mean = 0.0;
  double spread = 0.0;  // half the max-min range over seeds
  bool present = false;
};

inline std::string format_fixed(double value, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return std::string(buf);
}

inline void write_report_table(std::ostream& out, const std::string& title,
                               const std::vector<std::string>& surfaces,
                               const std::vector<double>& noise_levels,
                               const std::map<std::pair<std::string, double>, Aggregate>& cells) {
  out << "## " << title << "\n\n";
  out << "| noise |";
  for (const std::string& s : surfaces) out << ' ' << s << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < surfaces.size(); ++i) out << "---|";
  out << '\n';
  for (double sigma : noise_levels) {
    out << "| " << format_double(sigma) << " |";
    for (const std::string& s : surfaces) {
      const auto it = cells.find({s, sigma});
      if (it == cells.end() || !it->second.present) {
        out << " — |";
      } else {
        out << ' ' << format_fixed(it->second.mean) << " ± " << format_fixed(it->second.spread)
            << " |";
      }
    }
    out << '\n';
  }
  out << '\n';
}

}  // namespace detail

/// Full accuracy sweep: every surface x noise level x seed. Writes
/// benchmark_metrics.csv (one row per run and quantity), benchmark_report.md
/// (seed-aggregated tables), and one scatter_*.csv of paired
/// estimated-vs-true values per run for plotting.
inline void cmd_benchmark(const BenchmarkOptions& opt) {
  if (opt.surfaces.empty()) fail(Errc::InvalidArgument, "no surfaces given");
  if (opt.noise_levels.empty()) fail(Errc::InvalidArgument, "no noise levels given");
  if (opt.seeds.empty()) fail(Errc::InvalidArgument, "no seeds given");
  const SweepConfig sweep = opt.est.sweep();
  const CurvatureConfig curvature = opt.est.curvature();

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) fail(Errc::IoError, "cannot create directory: " + opt.out_dir);

  std::vector<std::pair<std::string, std::string>> kv;
  opt.est.echo(kv);
  kv.emplace_back("n", std::to_string(opt.n));
  kv.emplace_back("surfaces", detail::join(opt.surfaces, [](const std::string& s) { return s; }));
  kv.emplace_back("noise_levels",
                  detail::join(opt.noise_levels, [](double v) { return format_double(v); }));
  kv.emplace_back("seeds", detail::join(opt.seeds, [](std::uint64_t s) {
                    return std::to_string(s);
                  }));

  std::vector<MetricReport> all_reports;
  for (const std::string& name : opt.surfaces) {
    const SurfaceSpec spec = make_surface(name, {});
    for (double sigma : opt.noise_levels) {
      if (!(sigma >= 0.0)) fail(Errc::InvalidArgument, "noise level must be >= 0");
      for (std::uint64_t seed : opt.seeds) {
        BenchmarkRun run;
        try {
          run = run_benchmark_job(spec, opt.n, sigma, seed, sweep, curvature, opt.est.threads);
        } catch (const Error& e) {
          fail(e.code(), std::string(spec.name()) + " sigma=" + format_double(sigma) +
                             " seed=" + std::to_string(seed) + ": " + e.what());
        }
        all_reports.insert(all_reports.end(), run.reports.begin(), run.reports.end());

        const std::string scatter_path = opt.out_dir + "/scatter_" + spec.name() + "_sigma" +
                                         format_double(sigma) + "_seed" + std::to_string(seed) +
                                         ".csv";
        std::vector<std::pair<std::string, std::string>> skv = kv;
        skv.emplace_back("run_surface", spec.name());
        skv.emplace_back("run_sigma", format_double(sigma));
        skv.emplace_back("run_seed", std::to_string(seed));
        std::ofstream sout = detail::open_output(scatter_path);
        detail::write_header(sout, "benchmark", std::move(skv));
        sout << "gauss_est,gauss_true,mean_est,mean_true\n";
        for (std::size_t i = 0; i < run.gauss.estimate.size(); ++i) {
          sout << format_double(run.gauss.estimate[i]) << ','
               << format_double(run.gauss.truth[i]) << ','
               << format_double(run.mean_sum.estimate[i]) << ','
               << format_double(run.mean_sum.truth[i]) << '\n';
        }
        detail::finish_output(sout, scatter_path);
      }
    }
  }

  const std::string metrics_path = opt.out_dir + "/benchmark_metrics.csv";
  std::ofstream mout = detail::open_output(metrics_path);
  detail::write_header(mout, "benchmark", kv);
  mout << "surface,noise,quantity,rmse,energy_distance,pearson,n_valid,n_total,seed\n";
  for (const MetricReport& r : all_reports) {
    mout << r.surface << ',' << format_double(r.noise_sigma) << ',' << r.quantity << ','
         << format_double(r.rmse) << ',' << format_double(r.energy_distance) << ','
         << format_double(r.pearson) << ',' << std::to_string(r.n_valid) << ','
         << std::to_string(r.n_total) << ',' << std::to_string(r.seed) << '\n';
  }
  detail::finish_output(mout, metrics_path);

  // Seed-aggregated report in the style of a results table: one table per
  // metric, rows = noise levels, columns = surfaces, cell = mean ± spread.
  const auto aggregate = [&](const std::string& quantity, double MetricReport::*field) {
    std::map<std::pair<std::string, double>, detail::Aggregate> cells;
    for (const std::string& s : opt.surfaces) {
      for (double sigma : opt.noise_levels) {
        double sum = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        int count = 0;
        for (const MetricReport& r : all_reports) {
          if (r.surface != s || r.noise_sigma != sigma || r.quantity != quantity) continue;
          const double v = r.*field;
          if (std::isnan(v)) continue;
          if (count == 0) lo = hi = v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          sum += v;
          ++count;
        }
        detail::Aggregate agg;
        if (count > 0) {
          agg.mean = sum / count;
          agg.spread = 0.5 * (hi - lo);
          agg.present = true;
        }
        cells[{s, sigma}] = agg;
      }
    }
    return cells;
  };

  const std::string report_path = opt.out_dir + "/benchmark_report.md";
  std::ofstream rout = detail::open_output(report_path);
  detail::write_header(rout, "benchmark", kv, /*html=*/true);
  rout << "\n# Curvature benchmark\n\n";
  rout << "Gaussian-curvature rows compare the estimate with the analytic value; "
          "mean-curvature rows compare (kappa1+kappa2)/2 with the analytic mean "
          "curvature after aligning each estimate to the analytic normal's "
          "orientation. Cells are mean ± half-range over seeds "
       << detail::join(opt.seeds, [](std::uint64_t s) { return std::to_string(s); }) << " at n="
       << opt.n << ".\n\n";
  detail::write_report_table(rout, "Gaussian curvature RMSE", opt.surfaces, opt.noise_levels,
                             aggregate("gauss", &MetricReport::rmse));
  detail::write_report_table(rout, "Gaussian curvature energy distance", opt.surfaces,
                             opt.noise_levels, aggregate("gauss", &MetricReport::energy_distance));
  detail::write_report_table(rout, "Gaussian curvature Pearson correlation", opt.surfaces,
                             opt.noise_levels, aggregate("gauss", &MetricReport::pearson));
  detail::write_report_table(rout, "Mean curvature Pearson correlation", opt.surfaces,
                             opt.noise_levels, aggregate("mean_half", &MetricReport::pearson));
  detail::finish_output(rout, report_path);
}

}  // namespace adacurv
