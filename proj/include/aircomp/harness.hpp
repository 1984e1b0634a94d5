#ifndef AIRCOMP_HARNESS_HPP_
#define AIRCOMP_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/optimizer.hpp"

namespace aircomp {

enum class Scheme { kMa, kFpa, kBoth };

// A parameter that may be a scalar or a sweep list.
struct SweepAxis {
  std::vector<double> values;
  bool is_list = false;
};

struct ExperimentConfig {
  int num_sensors = 4;                             // "K"
  SweepAxis num_antennas{{4.0}, false};            // "N"
  int paths_per_sensor = 4;                        // "L"
  double path_loss_db = -100.0;
  double noise_dbm = -100.0;
  SweepAxis power_dbm{{15.0}, false};
  SweepAxis region_over_lambda{{4.0}, false};
  double wavelength = 0.1;
  double min_spacing_over_lambda = 0.5;
  int trials = 100;
  std::uint64_t master_seed = 1;
  Scheme scheme = Scheme::kBoth;
  OptimizerConfig optimizer;

  // Name of the list-valued field, or the power axis when none is a list.
  std::string sweep_name() const;
  const SweepAxis& sweep_axis() const;
  // Scenario parameters at one value of the sweep axis.
  ScenarioConfig point(double sweep_value) const;
};

// Throws ConfigError naming the offending key.
ExperimentConfig parse_config_text(const std::string& text);
// Also throws ConfigError when the file is missing or unreadable.
ExperimentConfig parse_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

struct SweepResult {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string scheme;  // "ma" or "fpa"
  double mean_mse = 0.0;
  double median_mse = 0.0;
  double std_mse = 0.0;  // sample standard deviation, 0 for one trial
  double mean_mse_per_k = 0.0;
  int trials = 0;
  double mean_outer_iters = 0.0;
  // Set when the point could not be run; statistics are then NaN.
  std::optional<std::string> error;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct TrialRecord {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string scheme;
  int trial = 0;
  double mse = 0.0;
  int outer_iters = 0;
  bool converged = false;
  std::vector<Position> positions;
};

struct RunOptions {
  int threads = 0;  // 0 = hardware concurrency
  bool keep_trials = false;
};

struct ExperimentOutput {
  std::vector<SweepResult> results;
  std::vector<TrialRecord> trials;  // filled when keep_trials is set
};

// Runs every sweep value x scheme over cfg.trials seeded scenarios. MA and
// FPA share the scenario of each trial index. Output does not depend on the
// thread count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                const RunOptions& options = {});

enum class OutputFormat { kCsv, kJson };

inline constexpr const char* kCsvHeader =
    "sweep_name,sweep_value,scheme,mean_mse,median_mse,std_mse,"
    "mean_mse_per_k,trials,mean_outer_iters";

std::string format_csv(const std::vector<SweepResult>& results);
std::string format_json(const std::vector<SweepResult>& results);
std::vector<SweepResult> parse_results_json(const std::string& text);

// Throws IoError when the file cannot be written.
void write_results(const std::vector<SweepResult>& results,
                   const std::filesystem::path& out_path, OutputFormat format);
void write_trial_dump(const std::vector<TrialRecord>& trials,
                      const std::filesystem::path& out_path);

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
};
SummaryStats summarize(std::vector<double> values);

// Horizontal gap, in dB, between the FPA and MA curves of log10(mean MSE)
// versus power at the midpoint of their shared MSE range. Positive when MA
// needs less power. Results must hold one power sweep for both schemes.
double power_margin_db(const std::vector<SweepResult>& results);

}  // namespace aircomp

#endif  // AIRCOMP_HARNESS_HPP_
