#include "aircomp/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "aircomp/error.hpp"
#include "test_support.hpp"

namespace aircomp {
namespace {

using testing::Instance;
using testing::random_instance;

constexpr double kPi = std::numbers::pi;

// Direct evaluation of the MSE definition, one antenna at a time.
double mse_oracle(const Scenario& s, const Solution& sol) {
  double total = 0.0;
  for (int k = 0; k < s.num_sensors(); ++k) {
    cd effective = 0.0;
    for (std::size_t n = 0; n < sol.positions.size(); ++n) {
      effective += std::conj(sol.combiner(static_cast<Eigen::Index>(n))) *
                   channel_gain(s.sensors[k], sol.positions[n], s.wavelength);
    }
    total += std::norm(effective * sol.powers[k] - 1.0);
  }
  for (Eigen::Index n = 0; n < sol.combiner.size(); ++n) {
    total += s.noise_power * std::norm(sol.combiner(n));
  }
  return total;
}

TEST(ComputeMse, ZeroCombinerGivesK) {
  Instance inst = random_instance(1);
  inst.sol.combiner.setZero();
  EXPECT_DOUBLE_EQ(compute_mse(inst.scenario, inst.sol), 4.0);
}

TEST(ComputeMse, PerfectMatchIsZero) {
  // Single path at the origin gives h = 1; sigma^2 is the only term left.
  Scenario s = testing::unit_scenario({{{{0.4, 0.2, 1.0}}, 1.0}}, 1, 2.0, 1e-300, 1.0);
  Solution sol{{{0.0, 0.0}}, {cd(1.0)}, CVec::Ones(1)};
  EXPECT_NEAR(compute_mse(s, sol), 0.0, 1e-15);
}

TEST(ComputeMse, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = random_instance(seed);
    const double mse = compute_mse(inst.scenario, inst.sol);
    EXPECT_GE(mse, 0.0);
    EXPECT_NEAR(mse, mse_oracle(inst.scenario, inst.sol), 1e-12 * (1.0 + mse));
  }
}

TEST(ComputeMse, RejectsDimensionMismatch) {
  Instance inst = random_instance(2);
  inst.sol.combiner = CVec::Ones(3);
  EXPECT_THROW(compute_mse(inst.scenario, inst.sol), InvalidInputError);
  inst = random_instance(2);
  inst.sol.powers.pop_back();
  EXPECT_THROW(compute_mse(inst.scenario, inst.sol), InvalidInputError);
}

// Simulates xhat = u^H (sum_k h_k w_k x_k + n) with unit-power sources and
// compares the empirical E|x - xhat|^2 against the closed form.
TEST(ComputeMse, AgreesWithMonteCarloOfReceivedSignal) {
  RandomStream rng(99);
  std::vector<SnChannelSpec> sensors;
  for (int k = 0; k < 3; ++k) {
    SnChannelSpec spec;
    for (int l = 0; l < 3; ++l) {
      spec.paths.push_back({rng.uniform(0, kPi), rng.uniform(0, kPi),
                            sample_complex_gaussian(rng, 1.0 / 3)});
    }
    sensors.push_back(spec);
  }
  const Scenario s = testing::unit_scenario(sensors, 3, 2.0, 0.3, 1.0);
  Solution sol;
  sol.positions = {{0.01, 0.02}, {0.09, 0.05}, {0.15, 0.17}};
  sol.powers = {cd(0.8, 0.1), cd(-0.3, 0.6), cd(0.5, -0.5)};
  sol.combiner = CVec(3);
  sol.combiner << cd(0.4, -0.2), cd(0.1, 0.3), cd(-0.25, 0.15);
  const double expected = compute_mse(s, sol);

  const CMat h = channel_matrix(s, sol.positions);
  const int samples = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    CVec y = CVec::Zero(3);
    cd x_sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      const cd x = sample_complex_gaussian(rng, 1.0);
      x_sum += x;
      y += h.col(k) * (sol.powers[k] * x);
    }
    for (int n = 0; n < 3; ++n) y(n) += sample_complex_gaussian(rng, s.noise_power);
    const double err = std::norm(x_sum - sol.combiner.dot(y));
    sum += err;
    sum_sq += err * err;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  EXPECT_NEAR(mean, expected, 3.0 * se) << "se " << se;
}

TEST(ComputeMse, PermutationInvariant) {
  const Instance inst = random_instance(5);
  Solution perm = inst.sol;
  const int order[] = {2, 0, 3, 1};
  for (int i = 0; i < 4; ++i) {
    perm.positions[i] = inst.sol.positions[order[i]];
    perm.combiner(i) = inst.sol.combiner(order[i]);
  }
  EXPECT_NEAR(compute_mse(inst.scenario, perm), compute_mse(inst.scenario, inst.sol),
              1e-12);
}

TEST(PositionCoeffs, SingleAntennaHasNoCrossTerm) {
  Instance inst = random_instance(3, 4, 1, 4);
  const PositionCoeffs co = position_coeffs(inst.scenario, inst.sol, 0);
  for (int k = 0; k < 4; ++k) {
    const cd expected = inst.sol.combiner(0) * std::conj(inst.sol.powers[k]);
    EXPECT_NEAR(std::abs(co.c[k] - expected), 0.0, 1e-12 * std::abs(expected));
  }
}

TEST(PositionCoeffs, ZeroWeightAntenna) {
  Instance inst = random_instance(4);
  inst.sol.combiner(2) = 0.0;
  const PositionCoeffs co = position_coeffs(inst.scenario, inst.sol, 2);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(co.c[k], cd(0.0));
    EXPECT_EQ(co.d[k], 0.0);
  }
}

TEST(PositionCoeffs, MatchesDefinition) {
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    const Instance inst = random_instance(seed);
    const Scenario& s = inst.scenario;
    for (int n = 0; n < 4; ++n) {
      const PositionCoeffs co = position_coeffs(s, inst.sol, n);
      const cd u_n = inst.sol.combiner(n);
      for (int k = 0; k < 4; ++k) {
        const cd w = inst.sol.powers[k];
        cd cross = 0.0;
        for (int m = 0; m < 4; ++m) {
          if (m == n) continue;
          cross += u_n * std::conj(inst.sol.combiner(m)) *
                   channel_gain(s.sensors[k], inst.sol.positions[m], s.wavelength);
        }
        const cd c = u_n * std::conj(w) - std::norm(w) * cross;
        const double d = std::norm(w * u_n);
        EXPECT_NEAR(std::abs(co.c[k] - c), 0.0, 1e-12 * (1.0 + std::abs(c)));
        EXPECT_NEAR(co.d[k], d, 1e-12 * (1.0 + d));
        EXPECT_GE(co.d[k], 0.0);
      }
    }
  }
}

TEST(PositionObjective, ZeroPowerOrWeightIsFlat) {
  Instance inst = random_instance(6);
  Instance zero_w = inst;
  for (auto& w : zero_w.sol.powers) w = 0.0;
  Instance zero_u = inst;
  zero_u.sol.combiner(1) = 0.0;
  RandomStream rng(1);
  for (int i = 0; i < 10; ++i) {
    const Position r{rng.uniform(0, 0.4), rng.uniform(0, 0.4)};
    EXPECT_EQ(position_objective(zero_w.scenario, zero_w.sol, 1, r), 0.0);
    EXPECT_EQ(position_objective(zero_u.scenario, zero_u.sol, 1, r), 0.0);
    const Eigen::Vector2d g =
        position_objective_gradient(zero_u.scenario, zero_u.sol, 1, r);
    EXPECT_EQ(g.norm(), 0.0);
  }
}

// MSE(r_n = r) + f_n(r) must not depend on r.
TEST(PositionObjective, SurrogateConsistency) {
  RandomStream rng(77);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const Instance inst = random_instance(seed);
    for (int n = 0; n < 4; ++n) {
      const PositionCoeffs co = position_coeffs(inst.scenario, inst.sol, n);
      double lo = 1e300;
      double hi = -1e300;
      for (int i = 0; i < 10; ++i) {
        const Position r{rng.uniform(0, 0.4), rng.uniform(0, 0.4)};
        Solution moved = inst.sol;
        moved.positions[n] = r;
        const double total =
            compute_mse(inst.scenario, moved) + position_objective(inst.scenario, co, r);
        lo = std::min(lo, total);
        hi = std::max(hi, total);
      }
      EXPECT_LT(hi - lo, 1e-9) << "seed " << seed << " n " << n;
    }
  }
}

TEST(PositionObjective, GradientMatchesCentralDifferences) {
  RandomStream rng(8);
  const double step = 1e-6 * 0.1;
  for (std::uint64_t seed = 200; seed < 225; ++seed) {
    const Instance inst = random_instance(seed);
    for (int n = 0; n < 4; ++n) {
      const PositionCoeffs co = position_coeffs(inst.scenario, inst.sol, n);
      const Position r{rng.uniform(0, 0.4), rng.uniform(0, 0.4)};
      const Eigen::Vector2d g = position_objective_gradient(inst.scenario, co, r);
      auto f = [&](double x, double y) {
        return position_objective(inst.scenario, co, {x, y});
      };
      const Eigen::Vector2d fd((f(r.x + step, r.y) - f(r.x - step, r.y)) / (2 * step),
                               (f(r.x, r.y + step) - f(r.x, r.y - step)) / (2 * step));
      EXPECT_LT((g - fd).norm() / g.norm(), 1e-5) << "seed " << seed;
    }
  }
}

// One sensor, one path, d = 0: f = 2 Re{h^* c} and |grad f| reaches
// 2 |c| (2 pi / lambda) |rho| |h| where the phase is in quadrature.
TEST(PositionObjective, SingleTermGradientAtQuadrature) {
  const double lambda = 0.1;
  const PathParam path{1.1, 0.6, cd(0.7, -0.4)};
  const Scenario s = testing::unit_scenario({{{path}, 1.0}}, 1, 4.0, 1.0, 1.0);
  const PositionCoeffs co{{cd(0.3, 0.9)}, {0.0}};
  const Eigen::Vector2d rho = propagation_vector(path);
  const double k = 2.0 * kPi / lambda;
  // Phase psi(r) = arg(c sigma^*) + k r.rho; pick r along rho with psi = pi/2.
  const double base = std::arg(co.c[0] * std::conj(path.gain_sigma));
  double shift = kPi / 2 - base;
  while (shift < 0) shift += 2 * kPi;
  const Position r = Position::from(rho * (shift / (k * rho.squaredNorm())));
  const Eigen::Vector2d g = position_objective_gradient(s, co, r);
  const double expected =
      2.0 * std::abs(co.c[0]) * k * rho.norm() * std::abs(channel_gain(s.sensors[0], r, lambda));
  EXPECT_NEAR(g.norm(), expected, 1e-9 * expected);
}

TEST(PositionObjective, FieldAndReferenceAgree) {
  const Instance inst = random_instance(300);
  const ChannelField field(inst.scenario);
  RandomStream rng(4);
  for (int i = 0; i < 20; ++i) {
    const Position r{rng.uniform(0, 0.4), rng.uniform(0, 0.4)};
    for (int k = 0; k < 4; ++k) {
      const cd ref = channel_gain(inst.scenario.sensors[k], r, inst.scenario.wavelength);
      EXPECT_NEAR(std::abs(field.gain(k, r) - ref), 0.0, 1e-12 * std::abs(ref));
    }
  }
}

}  // namespace
}  // namespace aircomp
