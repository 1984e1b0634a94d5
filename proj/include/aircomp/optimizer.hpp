#ifndef AIRCOMP_OPTIMIZER_HPP_
#define AIRCOMP_OPTIMIZER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aircomp/channel.hpp"
#include "aircomp/numerics.hpp"
#include "aircomp/objective.hpp"

namespace aircomp {

enum class InitMode { kGrid, kRandom, kUlaClipped };

std::string to_string(InitMode mode);
std::optional<InitMode> parse_init_mode(std::string_view text);

struct OptimizerConfig {
  int outer_max_iters = 200;
  double outer_rel_tol = 1e-6;
  int inner_max_iters = 100;
  double armijo_c = 1e-4;
  double step_shrink = 0.5;
  // Initial ascent step in meters; unset means wavelength / 4.
  std::optional<double> init_step;
  InitMode init_mode = InitMode::kGrid;
  int multistarts = 1;

  double initial_step(double wavelength) const {
    return init_step.value_or(wavelength / 4.0);
  }
};

// Throws InvalidInputError naming the offending field.
void validate(const OptimizerConfig& cfg);

struct OptimizeReport {
  std::vector<double> mse_trace;  // entry 0 is the initial point
  Solution final;
  int iterations = 0;
  bool converged = false;
  // Largest MSE increase observed across single block updates.
  double max_block_increase = 0.0;

  double final_mse() const { return mse_trace.back(); }
};

// u* = (sum_k |w_k|^2 h_k h_k^H + sigma^2 I)^{-1} sum_k w_k h_k.
CVec update_combiner(const Scenario& scenario, const CMat& channels,
                     const std::vector<cd>& powers);
CVec update_combiner(const Scenario& scenario, const Solution& sol);

// Minimizer of |g w - 1|^2 over |w|^2 <= budget, where g = u^H h_k.
cd optimal_power(cd effective_gain, double budget);
cd update_power(const Scenario& scenario, const Solution& sol, int k);

// Inside the region and pairwise distances >= D - 1e-12.
bool check_feasible(const Scenario& scenario,
                    const std::vector<Position>& positions);

// Projected gradient ascent on f_n for antenna n (0-based) starting at its
// current position. Never returns a point with lower f_n.
Position update_position(const Scenario& scenario, const Solution& sol, int n,
                         const OptimizerConfig& cfg);
Position update_position(const Scenario& scenario, const Solution& sol, int n,
                         const PositionCoeffs& coeffs,
                         const OptimizerConfig& cfg);
Position update_position(const Scenario& scenario, const ChannelField& field,
                         const Solution& sol, int n,
                         const PositionCoeffs& coeffs,
                         const OptimizerConfig& cfg);

std::vector<Position> init_positions(const Scenario& scenario, InitMode mode,
                                     RandomStream& stream);
std::vector<Position> init_positions(const Scenario& scenario,
                                     const OptimizerConfig& cfg,
                                     RandomStream& stream);

// Full alternating minimization over u, w_1..w_K and r_1..r_N.
OptimizeReport alternating_minimize(const Scenario& scenario,
                                    const OptimizerConfig& cfg,
                                    RandomStream& stream);

// Alternates only u and w_1..w_K with antennas held at `positions`.
OptimizeReport alternating_minimize_fixed(const Scenario& scenario,
                                          const std::vector<Position>& positions,
                                          const OptimizerConfig& cfg);

}  // namespace aircomp

#endif  // AIRCOMP_OPTIMIZER_HPP_
