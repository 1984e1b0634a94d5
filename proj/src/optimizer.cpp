#include "aircomp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aircomp/error.hpp"

namespace aircomp {

namespace {

constexpr double kSpacingSlack = 1e-12;
constexpr int kMaxPlacementAttempts = 100000;

bool inside_region(const Scenario& s, const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 &&
         p.x <= s.region_size && p.y >= 0.0 && p.y <= s.region_size;
}

bool spaced_from_others(const Scenario& s, const std::vector<Position>& positions,
                        int n, const Position& candidate) {
  for (int m = 0; m < static_cast<int>(positions.size()); ++m) {
    if (m == n) continue;
    if (distance(candidate, positions[static_cast<std::size_t>(m)]) <
        s.min_spacing - kSpacingSlack) {
      return false;
    }
  }
  return true;
}

Position clamp_to_region(const Scenario& s, const Eigen::Vector2d& v) {
  return {std::clamp(v.x(), 0.0, s.region_size),
          std::clamp(v.y(), 0.0, s.region_size)};
}

struct BlockState {
  const Scenario& scenario;
  Solution sol;
  CMat channels;
  double mse = 0.0;
  double max_increase = 0.0;

  void record(double next) {
    max_increase = std::max(max_increase, next - mse);
    mse = next;
  }
  double current_mse() const {
    return mse_from_channels(channels, sol.powers, sol.combiner,
                             scenario.noise_power);
  }
};

OptimizeReport run_blocks(const Scenario& scenario,
                          std::vector<Position> positions,
                          const OptimizerConfig& cfg, bool move_antennas) {
  const int n_ant = static_cast<int>(positions.size());
  BlockState st{scenario, {}, {}, 0.0, 0.0};
  st.sol.positions = std::move(positions);
  st.sol.powers.resize(static_cast<std::size_t>(scenario.num_sensors()));
  for (int k = 0; k < scenario.num_sensors(); ++k) {
    st.sol.powers[static_cast<std::size_t>(k)] =
        std::sqrt(scenario.power_budgets[static_cast<std::size_t>(k)]);
  }
  st.sol.combiner = CVec::Zero(n_ant);
  st.channels = channel_matrix(scenario, st.sol.positions);
  const ChannelField field(scenario);
  st.mse = st.current_mse();

  OptimizeReport report;
  report.mse_trace.push_back(st.mse);
  for (int iter = 0; iter < cfg.outer_max_iters; ++iter) {
    const double before = st.mse;

    st.sol.combiner = update_combiner(scenario, st.channels, st.sol.powers);
    st.record(st.current_mse());

    for (int k = 0; k < scenario.num_sensors(); ++k) {
      const cd gain = st.sol.combiner.dot(st.channels.col(k));
      st.sol.powers[static_cast<std::size_t>(k)] =
          optimal_power(gain, scenario.power_budgets[static_cast<std::size_t>(k)]);
      st.record(st.current_mse());
    }

    if (move_antennas) {
      for (int n = 0; n < n_ant; ++n) {
        const PositionCoeffs coeffs = position_coeffs(st.channels, st.sol, n);
        const Position next =
            update_position(scenario, field, st.sol, n, coeffs, cfg);
        st.sol.positions[static_cast<std::size_t>(n)] = next;
        for (int k = 0; k < scenario.num_sensors(); ++k) {
          st.channels(n, k) = field.gain(k, next);
        }
        st.record(st.current_mse());
      }
    }

    report.mse_trace.push_back(st.mse);
    report.iterations = iter + 1;
    if (before - st.mse <= cfg.outer_rel_tol * before) {
      report.converged = true;
      break;
    }
  }
  report.final = std::move(st.sol);
  report.max_block_increase = st.max_increase;
  return report;
}

}  // namespace

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::kGrid:
      return "grid";
    case InitMode::kRandom:
      return "random";
    case InitMode::kUlaClipped:
      return "ula-clipped";
  }
  return "grid";
}

std::optional<InitMode> parse_init_mode(std::string_view text) {
  if (text == "grid") return InitMode::kGrid;
  if (text == "random") return InitMode::kRandom;
  if (text == "ula-clipped") return InitMode::kUlaClipped;
  return std::nullopt;
}

void validate(const OptimizerConfig& cfg) {
  if (cfg.outer_max_iters < 1) throw InvalidInputError("outer_max_iters must be >= 1");
  if (!(cfg.outer_rel_tol > 0.0)) throw InvalidInputError("outer_rel_tol must be > 0");
  if (cfg.inner_max_iters < 1) throw InvalidInputError("inner_max_iters must be >= 1");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) {
    throw InvalidInputError("armijo_c must be in (0, 1)");
  }
  if (!(cfg.step_shrink > 0.0 && cfg.step_shrink < 1.0)) {
    throw InvalidInputError("step_shrink must be in (0, 1)");
  }
  if (cfg.init_step && !(*cfg.init_step > 0.0)) {
    throw InvalidInputError("init_step must be > 0");
  }
  if (cfg.multistarts < 1) throw InvalidInputError("multistarts must be >= 1");
}

CVec update_combiner(const Scenario& scenario, const CMat& channels,
                     const std::vector<cd>& powers) {
  const auto n_ant = channels.rows();
  CMat gram = CMat::Identity(n_ant, n_ant) * scenario.noise_power;
  CVec rhs = CVec::Zero(n_ant);
  for (Eigen::Index k = 0; k < channels.cols(); ++k) {
    const cd w = powers[static_cast<std::size_t>(k)];
    gram.noalias() += std::norm(w) * channels.col(k) * channels.col(k).adjoint();
    rhs += w * channels.col(k);
  }
  // Rank-one sums are Hermitian up to rounding; make it exact.
  const CMat hermitian = 0.5 * (gram + gram.adjoint());
  return hermitian_solve(hermitian, rhs);
}

CVec update_combiner(const Scenario& scenario, const Solution& sol) {
  return update_combiner(scenario, channel_matrix(scenario, sol.positions),
                         sol.powers);
}

cd optimal_power(cd effective_gain, double budget) {
  const double mag2 = std::norm(effective_gain);
  if (mag2 == 0.0) return {0.0, 0.0};
  // Unconstrained inverse when it fits the budget, else full power with
  // the phase aligned to the effective channel.
  const double multiplier =
      mag2 >= 1.0 / budget ? 0.0 : std::sqrt(mag2) / std::sqrt(budget) - mag2;
  cd w = std::conj(effective_gain) / (multiplier + mag2);
  // Guard the boundary against rounding.
  const double excess = std::norm(w) / budget;
  if (excess > 1.0) w /= std::sqrt(excess);
  return w;
}

cd update_power(const Scenario& scenario, const Solution& sol, int k) {
  if (k < 0 || k >= scenario.num_sensors()) {
    throw InvalidInputError("update_power: sensor index out of range");
  }
  const CVec h = channel_vector(scenario.sensors[static_cast<std::size_t>(k)],
                                sol.positions, scenario.wavelength);
  return optimal_power(sol.combiner.dot(h),
                       scenario.power_budgets[static_cast<std::size_t>(k)]);
}

bool check_feasible(const Scenario& scenario,
                    const std::vector<Position>& positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!inside_region(scenario, positions[i])) return false;
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (distance(positions[i], positions[j]) <
          scenario.min_spacing - kSpacingSlack) {
        return false;
      }
    }
  }
  return true;
}

Position update_position(const Scenario& scenario, const Solution& sol, int n,
                         const OptimizerConfig& cfg) {
  return update_position(scenario, sol, n, position_coeffs(scenario, sol, n),
                         cfg);
}

Position update_position(const Scenario& scenario, const Solution& sol, int n,
                         const PositionCoeffs& coeffs,
                         const OptimizerConfig& cfg) {
  return update_position(scenario, ChannelField(scenario), sol, n, coeffs, cfg);
}

Position update_position(const Scenario& scenario, const ChannelField& field,
                         const Solution& sol, int n,
                         const PositionCoeffs& coeffs,
                         const OptimizerConfig& cfg) {
  if (n < 0 || n >= static_cast<int>(sol.positions.size())) {
    throw InvalidInputError("update_position: antenna index out of range");
  }
  if (!check_feasible(scenario, sol.positions)) {
    throw FeasibilityError("update_position: current positions are infeasible");
  }
  const double lambda = scenario.wavelength;
  const double min_step = 1e-9 * lambda;
  const double max_step = cfg.initial_step(lambda);

  Position current = sol.positions[static_cast<std::size_t>(n)];
  Eigen::Vector2d grad;
  double value =
      position_objective_with_gradient(field, coeffs, current, &grad);
  double step = max_step;

  for (int iter = 0; iter < cfg.inner_max_iters; ++iter) {
    const double grad_norm = grad.norm();
    if (grad_norm < 1e-9) break;
    const Eigen::Vector2d direction = grad / grad_norm;

    bool accepted = false;
    bool stalled = false;
    while (step >= min_step) {
      const Position candidate =
          clamp_to_region(scenario, current.vec() + step * direction);
      const Eigen::Vector2d moved = candidate.vec() - current.vec();
      if (moved.norm() < 1e-12 * lambda) {
        // The box pins the iterate; no ascent direction remains.
        stalled = true;
        break;
      }
      if (spaced_from_others(scenario, sol.positions, n, candidate)) {
        Eigen::Vector2d next_grad;
        const double next_value = position_objective_with_gradient(
            field, coeffs, candidate, &next_grad);
        if (next_value >= value + cfg.armijo_c * grad.dot(moved)) {
          current = candidate;
          value = next_value;
          grad = next_grad;
          accepted = true;
          break;
        }
      }
      step *= cfg.step_shrink;
    }
    if (!accepted || stalled) break;
    step = std::min(max_step, step / cfg.step_shrink);
  }
  return current;
}

std::vector<Position> init_positions(const Scenario& scenario, InitMode mode,
                                     RandomStream& stream) {
  const int n_ant = scenario.num_antennas;
  const double side = scenario.region_size;
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(n_ant));

  switch (mode) {
    case InitMode::kGrid: {
      const int per_row =
          static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_ant))));
      const double pitch = std::max(scenario.min_spacing, side / per_row);
      const double offset = side / 2.0 - 0.5 * (per_row - 1) * pitch;
      for (int i = 0; i < n_ant; ++i) {
        const int col = i % per_row;
        const int row = i / per_row;
        out.push_back({std::clamp(offset + col * pitch, 0.0, side),
                       std::clamp(offset + row * pitch, 0.0, side)});
      }
      break;
    }
    case InitMode::kRandom: {
      int attempts = 0;
      while (static_cast<int>(out.size()) < n_ant) {
        if (++attempts > kMaxPlacementAttempts) {
          throw PlacementInfeasibleError(
              "init_positions: random placement exhausted its attempts");
        }
        const Position p{stream.uniform(0.0, side), stream.uniform(0.0, side)};
        if (spaced_from_others(scenario, out, -1, p)) out.push_back(p);
      }
      break;
    }
    case InitMode::kUlaClipped: {
      const double spacing = scenario.wavelength / 2.0;
      if ((n_ant - 1) * spacing > side) {
        throw PlacementInfeasibleError(
            "init_positions: half-wavelength array exceeds the region");
      }
      out = ula_positions(n_ant, spacing);
      break;
    }
  }
  if (!check_feasible(scenario, out)) {
    throw PlacementInfeasibleError("init_positions: cannot place " +
                                   std::to_string(n_ant) +
                                   " antennas at the required spacing");
  }
  return out;
}

std::vector<Position> init_positions(const Scenario& scenario,
                                     const OptimizerConfig& cfg,
                                     RandomStream& stream) {
  return init_positions(scenario, cfg.init_mode, stream);
}

OptimizeReport alternating_minimize(const Scenario& scenario,
                                    const OptimizerConfig& cfg,
                                    RandomStream& stream) {
  validate(scenario);
  validate(cfg);
  OptimizeReport best;
  for (int start = 0; start < cfg.multistarts; ++start) {
    // Start 0 honours init_mode; extra starts are random placements.
    RandomStream start_stream = stream.substream(static_cast<std::uint64_t>(start));
    const InitMode mode = start == 0 ? cfg.init_mode : InitMode::kRandom;
    OptimizeReport report = run_blocks(
        scenario, init_positions(scenario, mode, start_stream), cfg, true);
    if (start == 0 || report.final_mse() < best.final_mse()) {
      best = std::move(report);
    }
  }
  return best;
}

OptimizeReport alternating_minimize_fixed(const Scenario& scenario,
                                          const std::vector<Position>& positions,
                                          const OptimizerConfig& cfg) {
  validate(scenario);
  validate(cfg);
  if (static_cast<int>(positions.size()) != scenario.num_antennas) {
    throw InvalidInputError("alternating_minimize_fixed: need N positions");
  }
  return run_blocks(scenario, positions, cfg, false);
}

}  // namespace aircomp
