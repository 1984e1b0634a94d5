#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "aircomp/error.hpp"
#include "aircomp/harness.hpp"

namespace aircomp {

namespace {

// Substream of a trial's stream reserved for optimizer initialization.
constexpr std::uint64_t kOptimizerSubstream = 1;

struct TrialOutcome {
  double mse = std::numeric_limits<double>::quiet_NaN();
  int outer_iters = 0;
  bool converged = false;
  std::vector<Position> positions;
  std::optional<std::string> error;
};

struct WorkItem {
  std::size_t point = 0;
  int trial = 0;
};

std::vector<std::string> scheme_names(Scheme scheme) {
  switch (scheme) {
    case Scheme::kMa:
      return {"ma"};
    case Scheme::kFpa:
      return {"fpa"};
    case Scheme::kBoth:
      return {"ma", "fpa"};
  }
  return {};
}

TrialOutcome run_scheme(const std::string& scheme, const Scenario& scenario,
                        const ExperimentConfig& cfg, const SeedSpec& seed) {
  TrialOutcome out;
  try {
    OptimizeReport report;
    if (scheme == "ma") {
      RandomStream stream =
          derive_trial_stream(seed).substream(kOptimizerSubstream);
      report = alternating_minimize(scenario, cfg.optimizer, stream);
    } else {
      report = alternating_minimize_fixed(
          scenario,
          ula_positions(scenario.num_antennas, scenario.wavelength / 2.0),
          cfg.optimizer);
    }
    out.mse = report.final_mse();
    out.outer_iters = report.iterations;
    out.converged = report.converged;
    out.positions = std::move(report.final.positions);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid]
                                    : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                const RunOptions& options) {
  validate(cfg);
  const std::vector<double>& sweep = cfg.sweep_axis().values;
  const std::vector<std::string> schemes = scheme_names(cfg.scheme);
  const std::size_t n_points = sweep.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);

  // outcomes[(point * schemes + scheme) * trials + trial]
  std::vector<TrialOutcome> outcomes(n_points * schemes.size() * n_trials);
  std::vector<WorkItem> work;
  work.reserve(n_points * n_trials);
  for (std::size_t p = 0; p < n_points; ++p) {
    for (int t = 0; t < cfg.trials; ++t) work.push_back({p, t});
  }

  auto run_item = [&](const WorkItem& item) {
    const SeedSpec seed{cfg.master_seed, static_cast<std::uint64_t>(item.trial)};
    Scenario scenario;
    std::optional<std::string> scenario_error;
    try {
      scenario = generate_scenario(cfg.point(sweep[item.point]), seed);
    } catch (const Error& e) {
      scenario_error = e.what();
    }
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      TrialOutcome& slot =
          outcomes[(item.point * schemes.size() + s) * n_trials +
                   static_cast<std::size_t>(item.trial)];
      if (scenario_error) {
        slot.error = scenario_error;
      } else {
        slot = run_scheme(schemes[s], scenario, cfg, seed);
      }
    }
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(work.size(), 1)));
  if (threads == 1) {
    for (const auto& item : work) run_item(item);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < work.size(); j = next++) {
          run_item(work[j]);
        }
      });
    }
  }

  ExperimentOutput out;
  const std::string name = cfg.sweep_name();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t p = 0; p < n_points; ++p) {
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      SweepResult r;
      r.sweep_name = name;
      r.sweep_value = sweep[p];
      r.scheme = schemes[s];
      std::vector<double> mses;
      double iters = 0.0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const TrialOutcome& o = outcomes[(p * schemes.size() + s) * n_trials + t];
        if (o.error) {
          r.error = o.error;
          break;
        }
        mses.push_back(o.mse);
        iters += o.outer_iters;
        if (options.keep_trials) {
          out.trials.push_back({name, sweep[p], schemes[s], static_cast<int>(t),
                                o.mse, o.outer_iters, o.converged, o.positions});
        }
      }
      if (r.error) {
        r.mean_mse = r.median_mse = r.std_mse = r.mean_mse_per_k = nan;
        r.mean_outer_iters = nan;
        r.trials = 0;
      } else {
        const SummaryStats stats = summarize(mses);
        r.mean_mse = stats.mean;
        r.median_mse = stats.median;
        r.std_mse = stats.stddev;
        r.mean_mse_per_k = stats.mean / cfg.num_sensors;
        r.trials = cfg.trials;
        r.mean_outer_iters = iters / static_cast<double>(n_trials);
      }
      out.results.push_back(std::move(r));
    }
  }
  return out;
}

double power_margin_db(const std::vector<SweepResult>& results) {
  std::vector<std::pair<double, double>> ma;
  std::vector<std::pair<double, double>> fpa;
  for (const auto& r : results) {
    if (r.sweep_name != "power_dbm" || r.error) continue;
    auto& series = r.scheme == "ma" ? ma : fpa;
    series.emplace_back(r.sweep_value, std::log10(r.mean_mse));
  }
  if (ma.size() < 2 || fpa.size() < 2) {
    throw InvalidInputError("power_margin_db: need a power sweep for both schemes");
  }
  auto range = [](const auto& series) {
    double lo = series.front().second;
    double hi = lo;
    for (const auto& [p, level] : series) {
      lo = std::min(lo, level);
      hi = std::max(hi, level);
    }
    return std::pair{lo, hi};
  };
  const auto [ma_lo, ma_hi] = range(ma);
  const auto [fpa_lo, fpa_hi] = range(fpa);
  const double lo = std::max(ma_lo, fpa_lo);
  const double hi = std::min(ma_hi, fpa_hi);
  if (!(hi >= lo)) {
    throw InvalidInputError("power_margin_db: curves share no MSE range");
  }
  const double target = 0.5 * (lo + hi);
  // First crossing of the target level, interpolating power linearly in
  // log10(MSE).
  auto power_at = [target](const auto& series) {
    for (std::size_t i = 1; i < series.size(); ++i) {
      const auto [p0, l0] = series[i - 1];
      const auto [p1, l1] = series[i];
      if ((l0 - target) * (l1 - target) <= 0.0) {
        if (l1 == l0) return p0;
        return p0 + (target - l0) * (p1 - p0) / (l1 - l0);
      }
    }
    throw InvalidInputError("power_margin_db: target level not crossed");
  };
  return power_at(fpa) - power_at(ma);
}

}  // namespace aircomp
