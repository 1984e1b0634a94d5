#include "aircomp/objective.hpp"

#include <cmath>
#include <complex>

#include "aircomp/error.hpp"

namespace aircomp {

CMat channel_matrix(const Scenario& scenario,
                    const std::vector<Position>& positions) {
  const auto n_ant = static_cast<Eigen::Index>(positions.size());
  CMat h(n_ant, scenario.num_sensors());
  for (int k = 0; k < scenario.num_sensors(); ++k) {
    h.col(k) = channel_vector(scenario.sensors[static_cast<std::size_t>(k)],
                              positions, scenario.wavelength);
  }
  return h;
}

double mse_from_channels(const CMat& channels, const std::vector<cd>& powers,
                         const CVec& combiner, double noise_power) {
  if (channels.rows() != combiner.size() ||
      channels.cols() != static_cast<Eigen::Index>(powers.size())) {
    throw InvalidInputError("mse: dimension mismatch");
  }
  double mse = noise_power * combiner.squaredNorm();
  for (Eigen::Index k = 0; k < channels.cols(); ++k) {
    const cd effective = combiner.dot(channels.col(k));  // u^H h_k
    mse += std::norm(effective * powers[static_cast<std::size_t>(k)] - 1.0);
  }
  return mse;
}

double compute_mse(const Scenario& scenario, const Solution& sol) {
  if (static_cast<int>(sol.positions.size()) != sol.combiner.size() ||
      static_cast<int>(sol.powers.size()) != scenario.num_sensors()) {
    throw InvalidInputError("compute_mse: dimension mismatch");
  }
  return mse_from_channels(channel_matrix(scenario, sol.positions), sol.powers,
                           sol.combiner, scenario.noise_power);
}

PositionCoeffs position_coeffs(const CMat& channels, const Solution& sol,
                               int n) {
  const auto n_ant = channels.rows();
  if (n < 0 || n >= n_ant || sol.combiner.size() != n_ant ||
      static_cast<Eigen::Index>(sol.powers.size()) != channels.cols()) {
    throw InvalidInputError("position_coeffs: index or dimension mismatch");
  }
  const cd u_n = sol.combiner(n);
  PositionCoeffs out;
  out.c.resize(sol.powers.size());
  out.d.resize(sol.powers.size());
  for (Eigen::Index k = 0; k < channels.cols(); ++k) {
    const cd w = sol.powers[static_cast<std::size_t>(k)];
    // sum over n' != n of u_{n'}^* h_k(r_{n'})
    const cd others =
        sol.combiner.dot(channels.col(k)) - std::conj(u_n) * channels(n, k);
    out.c[static_cast<std::size_t>(k)] =
        u_n * std::conj(w) - std::norm(w) * u_n * others;
    out.d[static_cast<std::size_t>(k)] = std::norm(w * u_n);
  }
  return out;
}

PositionCoeffs position_coeffs(const Scenario& scenario, const Solution& sol,
                               int n) {
  if (static_cast<int>(sol.powers.size()) != scenario.num_sensors()) {
    throw InvalidInputError("position_coeffs: dimension mismatch");
  }
  return position_coeffs(channel_matrix(scenario, sol.positions), sol, n);
}

double position_objective_with_gradient(const ChannelField& field,
                                        const PositionCoeffs& coeffs,
                                        const Position& r,
                                        Eigen::Vector2d* grad) {
  double value = 0.0;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int k = 0; k < field.num_sensors(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const cd c = coeffs.c[idx];
    const double d = coeffs.d[idx];
    if (c == cd(0.0, 0.0) && d == 0.0) continue;
    cd h;
    ComplexGradient dh;
    field.gain_and_gradient(k, r, &h, grad != nullptr ? &dh : nullptr);
    value += 2.0 * std::real(std::conj(h) * c) - d * std::norm(h);
    if (grad != nullptr) {
      g.x() += 2.0 * std::real(c * std::conj(dh.dx)) -
               2.0 * d * std::real(std::conj(h) * dh.dx);
      g.y() += 2.0 * std::real(c * std::conj(dh.dy)) -
               2.0 * d * std::real(std::conj(h) * dh.dy);
    }
  }
  if (grad != nullptr) *grad = g;
  return value;
}

double position_objective_with_gradient(const Scenario& scenario,
                                        const PositionCoeffs& coeffs,
                                        const Position& r,
                                        Eigen::Vector2d* grad) {
  return position_objective_with_gradient(ChannelField(scenario), coeffs, r,
                                          grad);
}

double position_objective(const Scenario& scenario,
                          const PositionCoeffs& coeffs, const Position& r) {
  return position_objective_with_gradient(scenario, coeffs, r, nullptr);
}

double position_objective(const Scenario& scenario, const Solution& sol,
                          int n, const Position& r) {
  return position_objective(scenario, position_coeffs(scenario, sol, n), r);
}

Eigen::Vector2d position_objective_gradient(const Scenario& scenario,
                                            const PositionCoeffs& coeffs,
                                            const Position& r) {
  Eigen::Vector2d g;
  position_objective_with_gradient(scenario, coeffs, r, &g);
  return g;
}

Eigen::Vector2d position_objective_gradient(const Scenario& scenario,
                                            const Solution& sol, int n,
                                            const Position& r) {
  return position_objective_gradient(scenario,
                                     position_coeffs(scenario, sol, n), r);
}

}  // namespace aircomp
