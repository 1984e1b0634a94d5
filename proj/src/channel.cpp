#include "aircomp/channel.hpp"

#include <cmath>
#include <numbers>

#include "aircomp/error.hpp"

namespace aircomp {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void validate(const Scenario& s) {
  if (s.sensors.empty()) throw InvalidInputError("scenario: K must be >= 1");
  if (s.num_antennas < 1) throw InvalidInputError("scenario: N must be >= 1");
  if (!(s.region_size > 0.0)) throw InvalidInputError("scenario: A must be > 0");
  if (!(s.wavelength > 0.0)) throw InvalidInputError("scenario: lambda must be > 0");
  if (!(s.min_spacing >= 0.0)) throw InvalidInputError("scenario: D must be >= 0");
  if (!(s.noise_power > 0.0)) throw InvalidInputError("scenario: noise power must be > 0");
  if (s.power_budgets.size() != s.sensors.size()) {
    throw InvalidInputError("scenario: one power budget per sensor required");
  }
  for (double p : s.power_budgets) {
    if (!(p > 0.0)) throw InvalidInputError("scenario: power budgets must be > 0");
  }
  for (const auto& sensor : s.sensors) {
    if (sensor.paths.empty()) throw InvalidInputError("scenario: sensor without paths");
    if (!(sensor.path_loss_mu > 0.0)) throw InvalidInputError("scenario: path loss must be > 0");
  }
}

Eigen::Vector2d propagation_vector(const PathParam& path) {
  return {std::sin(path.elevation_theta) * std::cos(path.azimuth_phi),
          std::cos(path.elevation_theta)};
}

cd channel_gain(const SnChannelSpec& spec, const Position& r, double wavelength) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double amp = std::sqrt(spec.path_loss_mu);
  cd sum{0.0, 0.0};
  for (const auto& path : spec.paths) {
    const Eigen::Vector2d rho = propagation_vector(path);
    const double phase = k * (r.x * rho.x() + r.y * rho.y());
    sum += path.gain_sigma * cd(std::cos(phase), -std::sin(phase));
  }
  return amp * sum;
}

CVec channel_vector(const SnChannelSpec& spec,
                    const std::vector<Position>& positions, double wavelength) {
  CVec h(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t n = 0; n < positions.size(); ++n) {
    h(static_cast<Eigen::Index>(n)) = channel_gain(spec, positions[n], wavelength);
  }
  return h;
}

void channel_gain_and_gradient(const SnChannelSpec& spec, const Position& r,
                               double wavelength, cd* gain,
                               ComplexGradient* grad) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double amp = std::sqrt(spec.path_loss_mu);
  cd h{0.0, 0.0};
  cd gx{0.0, 0.0};
  cd gy{0.0, 0.0};
  for (const auto& path : spec.paths) {
    const Eigen::Vector2d rho = propagation_vector(path);
    const double phase = k * (r.x * rho.x() + r.y * rho.y());
    const cd term = path.gain_sigma * cd(std::cos(phase), -std::sin(phase));
    h += term;
    // d/dr exp(-j k r.rho) = -j k rho exp(...)
    const cd dterm = cd(0.0, -k) * term;
    gx += dterm * rho.x();
    gy += dterm * rho.y();
  }
  if (gain != nullptr) *gain = amp * h;
  if (grad != nullptr) *grad = {amp * gx, amp * gy};
}

ComplexGradient channel_gradient(const SnChannelSpec& spec, const Position& r,
                                 double wavelength) {
  ComplexGradient g;
  channel_gain_and_gradient(spec, r, wavelength, nullptr, &g);
  return g;
}

ChannelField::ChannelField(const Scenario& scenario) {
  const double k = 2.0 * std::numbers::pi / scenario.wavelength;
  terms_.reserve(scenario.sensors.size());
  for (const auto& sensor : scenario.sensors) {
    const double amp = std::sqrt(sensor.path_loss_mu);
    std::vector<Term> terms;
    terms.reserve(sensor.paths.size());
    for (const auto& path : sensor.paths) {
      const Eigen::Vector2d rho = propagation_vector(path);
      terms.push_back({amp * path.gain_sigma, k * rho.x(), k * rho.y()});
    }
    terms_.push_back(std::move(terms));
  }
}

cd ChannelField::gain(int k, const Position& r) const {
  cd h{0.0, 0.0};
  for (const Term& t : terms_[static_cast<std::size_t>(k)]) {
    const double phase = r.x * t.kx + r.y * t.ky;
    h += t.weight * cd(std::cos(phase), -std::sin(phase));
  }
  return h;
}

void ChannelField::gain_and_gradient(int k, const Position& r, cd* gain,
                                     ComplexGradient* grad) const {
  cd h{0.0, 0.0};
  cd gx{0.0, 0.0};
  cd gy{0.0, 0.0};
  for (const Term& t : terms_[static_cast<std::size_t>(k)]) {
    const double phase = r.x * t.kx + r.y * t.ky;
    const cd term = t.weight * cd(std::cos(phase), -std::sin(phase));
    h += term;
    // -j term
    const cd rotated{term.imag(), -term.real()};
    gx += rotated * t.kx;
    gy += rotated * t.ky;
  }
  if (gain != nullptr) *gain = h;
  if (grad != nullptr) *grad = {gx, gy};
}

Scenario generate_scenario(const ScenarioConfig& cfg, RandomStream& stream) {
  if (cfg.num_sensors < 1 || cfg.num_antennas < 1 || cfg.paths_per_sensor < 1) {
    throw InvalidInputError("scenario config: K, N and L must be >= 1");
  }
  if (!(cfg.wavelength > 0.0) || !(cfg.region_over_lambda > 0.0) ||
      !(cfg.min_spacing_over_lambda >= 0.0)) {
    throw InvalidInputError("scenario config: invalid geometry");
  }
  Scenario s;
  s.num_antennas = cfg.num_antennas;
  s.wavelength = cfg.wavelength;
  s.region_size = cfg.region_over_lambda * cfg.wavelength;
  s.min_spacing = cfg.min_spacing_over_lambda * cfg.wavelength;
  s.noise_power = dbm_to_watts(cfg.noise_dbm);
  s.power_budgets.assign(static_cast<std::size_t>(cfg.num_sensors),
                         dbm_to_watts(cfg.power_dbm));
  const double mu = db_to_linear(cfg.path_loss_db);
  const double variance = 1.0 / cfg.paths_per_sensor;
  s.sensors.resize(static_cast<std::size_t>(cfg.num_sensors));
  for (auto& sensor : s.sensors) {
    sensor.path_loss_mu = mu;
    sensor.paths.resize(static_cast<std::size_t>(cfg.paths_per_sensor));
    for (auto& path : sensor.paths) {
      path.elevation_theta = stream.uniform(0.0, std::numbers::pi);
      path.azimuth_phi = stream.uniform(0.0, std::numbers::pi);
      path.gain_sigma = sample_complex_gaussian(stream, variance);
    }
  }
  validate(s);
  return s;
}

Scenario generate_scenario(const ScenarioConfig& cfg, const SeedSpec& seed) {
  RandomStream stream = derive_trial_stream(seed);
  return generate_scenario(cfg, stream);
}

std::vector<Position> ula_positions(int num_antennas, double spacing) {
  if (num_antennas < 1 || !(spacing > 0.0)) {
    throw InvalidInputError("ula_positions: N >= 1 and spacing > 0 required");
  }
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(num_antennas));
  for (int n = 0; n < num_antennas; ++n) out.push_back({n * spacing, 0.0});
  return out;
}

}  // namespace aircomp
