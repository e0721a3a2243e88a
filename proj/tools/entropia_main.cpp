#include "entropia/error.hpp"
#include "entropia/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw entropia::Error(entropia::ErrorKind::config, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_for(const entropia::Error& e) {
  using entropia::ErrorKind;
  switch (e.kind()) {
    case ErrorKind::config:
    case ErrorKind::parameter_out_of_range:
    case ErrorKind::resolution_insufficient:
    case ErrorKind::precondition:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropia: numerical entropy experiments"};
  std::string task, system, eps, window, config_file, system_file, out;
  std::optional<unsigned> grid_g;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::size_t> n_proxy, centers, horizon, samples;
  bool quiet = false;

  app.add_option("task", task,
                 "entropy | local-entropy | bound-curve | verify-theorem | verify-corollary | "
                 "certify-envelopes | schedule-report")
      ->required();
  app.add_option("--config", config_file, "key=value experiment file");
  app.add_option("--system", system, "zoo name, e.g. doubling, rotation:0.3, cat, suspend:doubling:1.25");
  app.add_option("--system-file", system_file, "key=value system description");
  auto* eps_opt = app.add_option("--eps", eps, "decreasing scale ladder, e.g. 2^-4,2^-5,2^-6");
  app.add_option("--grid-g", grid_g, "grid resolution exponent (step 2^-g)");
  auto* window_opt = app.add_option("--window", window, "fit window a,b");
  app.add_option("--seed", seed, "seed for quasi-random sampling");
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--N-proxy", n_proxy, "step count standing in for the infinite ball");
  app.add_option("--centers", centers, "quasi-random centres for local entropy");
  app.add_option("--horizon", horizon, "last n of schedule sweeps");
  app.add_option("--samples", samples, "points per system for envelope certification");
  app.add_flag("-q,--quiet", quiet, "do not print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    entropia::ExperimentConfig config;
    if (!config_file.empty()) config = entropia::parse_config(slurp(config_file));
    config.task = entropia::task_from_string(task);
    if (!system.empty()) config.system = system;
    if (!system_file.empty()) config.system_text = slurp(system_file);
    if (*eps_opt) config.eps_ladder = entropia::parse_eps_ladder(eps, "--eps");
    if (grid_g) config.grid_g = *grid_g;
    if (*window_opt) std::tie(config.n_min, config.n_max) = entropia::parse_window(window, "--window");
    if (seed) config.seed = *seed;
    if (!out.empty()) config.output_dir = out;
    if (workers) config.workers = *workers;
    if (n_proxy) config.N_proxy = *n_proxy;
    if (centers) config.centers = *centers;
    if (horizon) config.horizon = *horizon;
    if (samples) config.samples = *samples;
    if (const char* b = std::getenv("ENTROPIA_BUDGET_SECONDS"); b && *b) {
      try {
        config.budget_seconds = std::stod(b);
      } catch (const std::exception&) {
        throw entropia::Error(entropia::ErrorKind::config, "ENTROPIA_BUDGET_SECONDS is not a number");
      }
    }
    config.validate();

    entropia::RunRecord record = entropia::run(config);
    entropia::write_outputs(record, config.output_dir);
    if (!quiet) std::cout << record.summary;
    return record.exit_code();
  } catch (const entropia::Error& e) {
    std::cerr << "entropia: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "entropia: " << e.what() << '\n';
    return 1;
  }
}
