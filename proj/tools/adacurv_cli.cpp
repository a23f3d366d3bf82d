// Command-line driver: generate benchmark clouds, estimate curvature on CSV
// point clouds, and run the full accuracy benchmark.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adacurv/commands.hpp"

namespace {

// Every subcommand exposes the same estimator/config surface, even where a
// command ignores part of it (generate has no estimator stage; estimate has
// no randomness), so scripts can pass one flag set everywhere.
void add_shared_flags(CLI::App* cmd, adacurv::EstimatorOptions* est, std::uint64_t* seed,
                      std::string* config_path) {
  cmd->add_option("--gamma", est->gamma, "Explained-variance threshold in (0,1)")
      ->capture_default_str();
  cmd->add_option("--extreme-fraction", est->extreme_fraction,
                  "Fraction of directional samples in each extreme slice")
      ->capture_default_str();
  cmd->add_option("--kernel", est->kernel, "Weighting kernel")
      ->check(CLI::IsMember({"gauss", "epan"}))
      ->capture_default_str();
  cmd->add_option("--bandwidth", est->bandwidth, "Bandwidth of the gauss kernel, in (0,1]")
      ->capture_default_str();
  cmd->add_option("--grid-size", est->grid_size, "Number of radii in the scale sweep")
      ->capture_default_str();
  cmd->add_option("--max-radius-factor", est->max_radius_factor,
                  "Largest sweep radius as a fraction of the data bound")
      ->capture_default_str();
  cmd->add_option("--min-neighbors", est->min_neighbors,
                  "Neighbor count required for a radius to be usable")
      ->capture_default_str();
  cmd->add_option("--seed", *seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", est->threads, "Worker threads (0 = all available)")
      ->capture_default_str();
  cmd->add_option("--config", *config_path,
                  "Key=value file applied where a flag was not given on the command line");
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

std::string trimmed(const std::string& text) {
  const char* ws = " \t";
  const auto begin = text.find_first_not_of(ws);
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(ws);
  return text.substr(begin, end - begin + 1);
}

struct ConfigEntry {
  std::string key;
  std::string value;
};

// Reads `key = value` lines; '#' lines and blank lines are skipped.  Values
// keep any '=' characters after the first one (paths, expressions).
std::vector<ConfigEntry> read_config_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in.good())
    adacurv::fail(adacurv::Errc::IoError, "cannot open config file: " + path);
  std::vector<ConfigEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trimmed(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    ConfigEntry entry;
    if (eq != std::string::npos) {
      entry.key = trimmed(stripped.substr(0, eq));
      entry.value = trimmed(stripped.substr(eq + 1));
    }
    if (entry.key.empty())
      adacurv::fail(adacurv::Errc::FormatError,
                    path + ": line " + std::to_string(line_no) + ": expected key=value");
    entries.push_back(std::move(entry));
  }
  return entries;
}

// Config-file support.  CLI11 only honors set_config on the root app, never
// on a subcommand, so the precedence contract (flags over config entries over
// built-in defaults) is implemented here: every config entry the command
// understands and the user did not pass explicitly is injected as a
// `--key=value` argument right after the subcommand name.  Keys may use
// underscores or hyphens, so the `key=value` lines echoed into every output
// header can be pasted back as a config file; keys the command has no option
// for (another command's settings, the echoed `command=` line) are skipped.
std::vector<std::string> merge_config_args(const CLI::App& sub, std::vector<std::string> args,
                                           std::size_t sub_index) {
  std::string path;
  for (std::size_t i = sub_index + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(std::string("--config=").size());
  }
  if (path.empty()) return args;

  std::vector<std::string> synthesized;
  for (const ConfigEntry& entry : read_config_entries(path)) {
    std::string key = entry.key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (sub.get_option_no_throw(flag) == nullptr) continue;
    bool given_on_command_line = false;
    for (std::size_t i = sub_index + 1; i < args.size() && !given_on_command_line; ++i)
      given_on_command_line = args[i] == flag || args[i].rfind(flag + "=", 0) == 0;
    if (!given_on_command_line) synthesized.push_back(flag + "=" + entry.value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_index) + 1, synthesized.begin(),
              synthesized.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal curvature estimation for 3-D point clouds via "
               "scale-adaptive kernel-weighted local PCA"};
  app.name("adacurv_cli");
  app.set_version_flag("--version", adacurv::kVersion);
  app.require_subcommand(1);

  adacurv::GenerateOptions gen;
  adacurv::EstimatorOptions gen_est_unused;
  std::string gen_config;
  std::string gen_sampling{"area"};
  CLI::App* cmd_gen = app.add_subcommand("generate", "Sample a benchmark surface to CSV");
  add_shared_flags(cmd_gen, &gen_est_unused, &gen.seed, &gen_config);
  cmd_gen->add_option("--surface", gen.surface, "torus | ellipsoid | saddle | sphere | plane")
      ->capture_default_str();
  cmd_gen->add_option("--params", gen.params, "Surface parameters (defaults if omitted)")
      ->delimiter(',');
  cmd_gen->add_option("--n", gen.n, "Number of samples")->capture_default_str();
  cmd_gen->add_option("--sigma", gen.sigma, "Gaussian noise standard deviation")
      ->capture_default_str();
  cmd_gen->add_option("--sampling", gen_sampling,
                      "area: uniform over the surface; param: uniform in parameters")
      ->check(CLI::IsMember({"area", "param"}))
      ->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "Output CSV path")->required();

  adacurv::EstimateOptions est;
  std::uint64_t est_seed_unused = 1;
  std::string est_config;
  CLI::App* cmd_est =
      app.add_subcommand("estimate", "Estimate curvature for a CSV point cloud");
  add_shared_flags(cmd_est, &est.est, &est_seed_unused, &est_config);
  cmd_est->add_option("--input", est.input, "Input CSV with x,y,z columns")->required();
  cmd_est->add_option("--output", est.output, "Output CSV path")->required();

  adacurv::BenchmarkOptions bench;
  std::uint64_t bench_seed = 0;
  std::string bench_config;
  CLI::App* cmd_bench =
      app.add_subcommand("benchmark", "Accuracy sweep over surfaces, noise levels and seeds");
  add_shared_flags(cmd_bench, &bench.est, &bench_seed, &bench_config);
  cmd_bench->add_option("--surfaces", bench.surfaces, "Surfaces to benchmark")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench->add_option("--noise-levels", bench.noise_levels, "Noise standard deviations")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench->add_option("--seeds", bench.seeds, "Seeds (one run per seed)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench->add_option("--n", bench.n, "Samples per run")->capture_default_str();
  cmd_bench->add_option("--out-dir", bench.out_dir, "Output directory")->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const CLI::App* sub = nullptr;
    std::size_t sub_index = 0;
    for (std::size_t i = 0; i < args.size() && sub == nullptr; ++i)
      for (const CLI::App* cmd : {cmd_gen, cmd_est, cmd_bench})
        if (args[i] == cmd->get_name()) {
          sub = cmd;
          sub_index = i;
          break;
        }
    if (sub != nullptr) args = merge_config_args(*sub, std::move(args), sub_index);
  } catch (const adacurv::Error& e) {
    std::cerr << "error[" << adacurv::errc_name(e.code()) << "]: " << one_line(e.what()) << '\n';
    return 1;
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes args back to front
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error[CliUsage]: " << one_line(e.what()) << '\n';
    return 1;
  }

  try {
    if (cmd_gen->parsed()) {
      gen.param_uniform = gen_sampling == "param";
      adacurv::cmd_generate(gen);
    } else if (cmd_est->parsed()) {
      adacurv::cmd_estimate(est);
    } else if (cmd_bench->parsed()) {
      // A bare --seed means "benchmark this one seed" unless an explicit
      // seed list was also given.
      if (cmd_bench->count("--seed") > 0 && cmd_bench->count("--seeds") == 0)
        bench.seeds = {bench_seed};
      adacurv::cmd_benchmark(bench);
    }
  } catch (const adacurv::Error& e) {
    std::cerr << "error[" << adacurv::errc_name(e.code()) << "]: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
