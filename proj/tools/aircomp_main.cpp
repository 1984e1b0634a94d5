// Command-line driver for the AirComp Monte Carlo experiments.
//
//   aircomp run --config cfg.json [--out results.csv] [--format csv|json]
//               [--seed N] [--trials N] [--dump-trials trials.csv]
//               [--threads N]
//   aircomp validate --config cfg.json
//
// Exit codes: 0 success, 2 config error, 3 runtime error.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "aircomp/error.hpp"
#include "aircomp/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna over-the-air computation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int trials = 0;
  std::string dump_path;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_path, "Output file (stdout when omitted)");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override master_seed");
  CLI::Option* trials_opt =
      run->add_option("--trials", trials, "Override trials")->check(CLI::PositiveNumber);
  run->add_option("--dump-trials", dump_path, "Write per-trial records (CSV)");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* validate = app.add_subcommand("validate", "Parse and check a config");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  aircomp::ExperimentConfig cfg;
  try {
    cfg = aircomp::parse_config(config_path);
    if (*seed_opt) cfg.master_seed = seed;
    if (*trials_opt) cfg.trials = trials;
    aircomp::validate(cfg);
  } catch (const aircomp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (validate->parsed()) {
    std::cout << "ok: " << cfg.sweep_axis().values.size() << " sweep point(s) over "
              << cfg.sweep_name() << ", " << cfg.trials << " trials\n";
    return 0;
  }

  try {
    aircomp::RunOptions options;
    options.threads = threads;
    options.keep_trials = !dump_path.empty();
    const aircomp::ExperimentOutput output = aircomp::run_experiment(cfg, options);
    const auto fmt = format == "json" ? aircomp::OutputFormat::kJson
                                      : aircomp::OutputFormat::kCsv;
    if (out_path.empty()) {
      std::cout << (fmt == aircomp::OutputFormat::kJson
                        ? aircomp::format_json(output.results)
                        : aircomp::format_csv(output.results));
    } else {
      aircomp::write_results(output.results, out_path, fmt);
    }
    if (!dump_path.empty()) aircomp::write_trial_dump(output.trials, dump_path);
    for (const auto& r : output.results) {
      if (r.error) {
        std::cerr << "warning: " << r.sweep_name << "=" << r.sweep_value << " "
                  << r.scheme << ": " << *r.error << "\n";
      }
    }
  } catch (const aircomp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
