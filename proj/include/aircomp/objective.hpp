#ifndef AIRCOMP_OBJECTIVE_HPP_
#define AIRCOMP_OBJECTIVE_HPP_

#include <vector>

#include <Eigen/Dense>

#include "aircomp/channel.hpp"
#include "aircomp/numerics.hpp"

namespace aircomp {

// Decision variables of the MSE problem.
struct Solution {
  std::vector<Position> positions;  // r_n, length N
  std::vector<cd> powers;           // w_k, length K
  CVec combiner;                    // u, length N
};

// N x K matrix whose column k is h_k evaluated at `positions`.
CMat channel_matrix(const Scenario& scenario,
                    const std::vector<Position>& positions);

// sum_k |u^H h_k w_k - 1|^2 + sigma^2 ||u||^2 for a precomputed channel
// matrix.
double mse_from_channels(const CMat& channels, const std::vector<cd>& powers,
                         const CVec& combiner, double noise_power);

// Computation MSE with channels evaluated at sol.positions. Throws
// InvalidInputError on dimension mismatch.
double compute_mse(const Scenario& scenario, const Solution& sol);

// Coefficients of the single-antenna subproblem for antenna n (0-based):
//   c_k = u_n w_k^* - |w_k|^2 sum_{n' != n} u_n u_{n'}^* h_k(r_{n'})
//   d_k = |w_k u_n|^2
struct PositionCoeffs {
  std::vector<cd> c;
  std::vector<double> d;
};

PositionCoeffs position_coeffs(const Scenario& scenario, const Solution& sol,
                               int n);
// Same, reading h_k(r_{n'}) from a channel matrix built at sol.positions.
PositionCoeffs position_coeffs(const CMat& channels, const Solution& sol,
                               int n);

// f_n(r) = sum_k 2 Re{h_k(r)^* c_k} - d_k |h_k(r)|^2.
// MSE(r_n = r) + f_n(r) does not depend on r.
double position_objective(const Scenario& scenario,
                          const PositionCoeffs& coeffs, const Position& r);
double position_objective(const Scenario& scenario, const Solution& sol,
                          int n, const Position& r);

Eigen::Vector2d position_objective_gradient(const Scenario& scenario,
                                            const PositionCoeffs& coeffs,
                                            const Position& r);
Eigen::Vector2d position_objective_gradient(const Scenario& scenario,
                                            const Solution& sol, int n,
                                            const Position& r);

// Value and gradient sharing one channel evaluation; `grad` may be null.
double position_objective_with_gradient(const ChannelField& field,
                                        const PositionCoeffs& coeffs,
                                        const Position& r,
                                        Eigen::Vector2d* grad);
double position_objective_with_gradient(const Scenario& scenario,
                                        const PositionCoeffs& coeffs,
                                        const Position& r,
                                        Eigen::Vector2d* grad);

}  // namespace aircomp

#endif  // AIRCOMP_OBJECTIVE_HPP_
