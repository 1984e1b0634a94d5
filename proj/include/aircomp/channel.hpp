#ifndef AIRCOMP_CHANNEL_HPP_
#define AIRCOMP_CHANNEL_HPP_

#include <vector>

#include <Eigen/Dense>

#include "aircomp/numerics.hpp"

namespace aircomp {

// Antenna location in the receive plane, meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  Eigen::Vector2d vec() const { return {x, y}; }
  static Position from(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

struct PathParam {
  double elevation_theta = 0.0;  // radians
  double azimuth_phi = 0.0;      // radians
  cd gain_sigma{1.0, 0.0};       // small-scale fading coefficient
};

struct SnChannelSpec {
  std::vector<PathParam> paths;
  double path_loss_mu = 1.0;  // linear power ratio
};

struct Scenario {
  std::vector<SnChannelSpec> sensors;
  int num_antennas = 1;
  double region_size = 1.0;  // side of the square region [0, A]^2, meters
  double wavelength = 0.1;   // meters
  double min_spacing = 0.0;  // meters
  double noise_power = 1.0;  // watts
  std::vector<double> power_budgets;  // watts, one per sensor

  int num_sensors() const { return static_cast<int>(sensors.size()); }
};

// Throws InvalidInputError if the scenario breaks its invariants.
void validate(const Scenario& scenario);

// Physical parameters of one experiment point, in the units the
// experiment configuration uses.
struct ScenarioConfig {
  int num_sensors = 4;
  int num_antennas = 4;
  int paths_per_sensor = 4;
  double path_loss_db = -100.0;
  double noise_dbm = -100.0;
  double power_dbm = 15.0;
  double region_over_lambda = 4.0;
  double wavelength = 0.1;
  double min_spacing_over_lambda = 0.5;
};

// Plane-wave direction [sin(theta) cos(phi), cos(theta)].
Eigen::Vector2d propagation_vector(const PathParam& path);

// Field-response gain of one sensor at position r:
//   h(r) = sum_l sqrt(mu) sigma_l exp(-j 2pi/lambda r^T rho_l).
cd channel_gain(const SnChannelSpec& spec, const Position& r, double wavelength);

CVec channel_vector(const SnChannelSpec& spec,
                    const std::vector<Position>& positions, double wavelength);

// d h / d x and d h / d y.
struct ComplexGradient {
  cd dx;
  cd dy;
};

ComplexGradient channel_gradient(const SnChannelSpec& spec, const Position& r,
                                 double wavelength);

// Gain and gradient in one pass over the paths.
void channel_gain_and_gradient(const SnChannelSpec& spec, const Position& r,
                               double wavelength, cd* gain,
                               ComplexGradient* grad);

// Per-sensor plane-wave terms with sqrt(mu), sigma and the scaled
// propagation vector folded in. Evaluates the same sums as channel_gain and
// channel_gradient without recomputing angles.
class ChannelField {
 public:
  explicit ChannelField(const Scenario& scenario);

  int num_sensors() const { return static_cast<int>(terms_.size()); }
  cd gain(int k, const Position& r) const;
  void gain_and_gradient(int k, const Position& r, cd* gain,
                         ComplexGradient* grad) const;

 private:
  struct Term {
    cd weight;  // sqrt(mu) sigma
    double kx;  // 2pi/lambda rho_x
    double ky;
  };
  std::vector<std::vector<Term>> terms_;
};

// Draws angles uniformly on [0, pi] and sigma ~ CN(0, 1/L) for every path;
// everything else is converted from the config.
Scenario generate_scenario(const ScenarioConfig& cfg, const SeedSpec& seed);
Scenario generate_scenario(const ScenarioConfig& cfg, RandomStream& stream);

// Fixed uniform linear array ((n-1) spacing, 0), n = 1..N.
std::vector<Position> ula_positions(int num_antennas, double spacing);

}  // namespace aircomp

#endif  // AIRCOMP_CHANNEL_HPP_
