/*
 * Copyright 2026 The rotor-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rotor_lab/errors.hpp"
#include "rotor_lab/exact_observables.hpp"
#include "rotor_lab/langevin.hpp"
#include "support/oracles.hpp"

using namespace rotor_lab;

namespace {

// |a - b| in units of the combined standard error.
double sigmas(const ObservableEstimate& e, double exact) {
  return std::abs(e.mean - exact) / e.std_error.value();
}

double sigmas(const ObservableEstimate& a, const ObservableEstimate& b) {
  return std::abs(a.mean - b.mean) /
         std::hypot(a.std_error.value(), b.std_error.value());
}

SimConfig small_sim(double dt, std::uint64_t steps, std::uint64_t traj, std::uint64_t seed) {
  SimConfig s;
  s.dt = dt;
  s.n_steps = steps;
  s.n_traj = traj;
  s.master_seed = seed;
  return s;
}

double energy(const PhaseState& s, double m, const PotentialCoefficients& c) {
  return 0.5 * m * (s.v1 * s.v1 + s.v2 * s.v2) +
         0.5 * (c.A * s.x1 * s.x1 + 2 * c.C * s.x1 * s.x2 + c.B * s.x2 * s.x2);
}

}  // namespace

TEST_CASE("frictionless isotropic oscillator conserves energy to second order") {
  RotorParams p;
  p.eta = 0.0;
  const PotentialCoefficients c{1.0, 1.0, 0.0};
  auto drift = [&](double dt) {
    State s = make_state(PhaseState{1.0, 0.0, 0.0, 0.5}, c, DriveSpec{}, 0.0);
    const double e0 = energy(s.phase, p.m, c);
    const int n = static_cast<int>(std::lround(2 * kPi / dt));
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      s = step(s, 0.0, 0.0, p, c, DriveSpec{}, k * dt, dt);
      worst = std::max(worst, std::abs(energy(s.phase, p.m, c) - e0) / e0);
    }
    return worst;
  };
  const double coarse = drift(1e-2);
  const double fine = drift(5e-3);
  CHECK(coarse < 1e-4);
  CHECK(fine < coarse / 3.0);
}

TEST_CASE("pure damping drains the mechanical energy") {
  RotorParams p;
  p.eta = 0.5;
  p.alpha = 0.4;
  const auto c = build_coefficients(p);
  State s = make_state(PhaseState{1.0, -0.5, 0.3, 0.2}, c, DriveSpec{}, 0.0);
  const double e0 = mechanical_energy(s.phase, p, c);
  double prev = e0;
  const double dt = 1e-3;
  for (int k = 0; k < 200000; ++k) {
    s = step(s, 0.0, 0.0, p, c, DriveSpec{}, k * dt, dt);
    const double e = mechanical_energy(s.phase, p, c);
    REQUIRE(e <= prev + 1e-15 * e0);
    prev = e;
  }
  CHECK(prev < 1e-12 * e0);
}

TEST_CASE("unstable step sizes are reported") {
  RotorParams p;
  p.m = 1e-3;
  const auto c = build_coefficients(p);
  State s = make_state(PhaseState{1.0, 1.0, 0.0, 0.0}, c, DriveSpec{}, 0.0);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 10000; ++k) s = step(s, 0.0, 0.0, p, c, DriveSpec{}, k * 5.0, 5.0);
      }(),
      NonFiniteState);
}

TEST_CASE("equilibrium white-noise ensemble") {
  RotorParams p;
  p.alpha = 0.6;
  const double T = 1.5;
  const BathPair b{T, T, NoiseModel::ClassicalWhite};
  const auto e = run_ensemble(p, b, DriveSpec{}, small_sim(1e-2, 1 << 15, 200, 31));
  const auto c = build_coefficients(p);
  const double I_exact = p.m * T * (c.A + c.B) / (c.A * c.B - c.C * c.C);
  CHECK(sigmas(e.estimates.at("I"), I_exact) < 3.0);
  CHECK(sigmas(e.estimates.at("L"), 0.0) < 3.0);
  CHECK(sigmas(e.estimates.at("M_xi"), 0.0) < 3.0);
  // Delta r_q = r_q1 - r_q2 per trajectory.
  std::vector<double> dq;
  for (const auto& t : e.trajectories) dq.push_back(t[Observable::r_q1].mean() - t[Observable::r_q2].mean());
  CHECK(sigmas(estimate_from_samples(dq, 0), 0.0) < 3.0);
  // Stationarity: halves of the averaging window agree.
  for (const char* name : {"L", "I", "r_q1"}) {
    CHECK(sigmas(e.first_half.at(name), e.second_half.at(name)) < 3.0);
  }
}

TEST_CASE("classical two-temperature ensemble matches the covariance oracle") {
  RotorParams p;
  const BathPair b{1.0, 3.0, NoiseModel::ClassicalWhite};
  const auto e = run_ensemble(p, b, DriveSpec{}, small_sim(1e-2, 1 << 15, 200, 77));
  const auto mom = oracle::classical_moments(p, 1.0, 3.0);
  CHECK(sigmas(e.estimates.at("L"), mom.L) < 3.0);
  CHECK(sigmas(e.estimates.at("I"), mom.I) < 3.0);
  CHECK(sigmas(e.estimates.at("r_q1"), p.eta * (1.0 - mom.vv1)) < 3.0);
}

TEST_CASE("driven run keeps the energy books balanced") {
  RotorParams p;
  const BathPair b{1.0, 2.0, NoiseModel::ClassicalWhite};
  const DriveSpec d{1.0, 1.3};
  const auto e = run_ensemble(p, b, d, small_sim(1e-2, 1 << 15, 200, 5));
  std::vector<double> total;
  for (const auto& t : e.trajectories) {
    total.push_back(t[Observable::r_q1].mean() + t[Observable::r_q2].mean() +
                    t[Observable::r_w].mean());
  }
  CHECK(sigmas(estimate_from_samples(total, 0), 0.0) < 3.0);
  const double L_exact = angular_momentum_classical(p, b) + driven_angular_momentum(p, 0.0, d).L_drive;
  CHECK(sigmas(e.estimates.at("L"), L_exact) < 3.0);
  CHECK(sigmas(e.estimates.at("r_w"), work_rate(p, d)) < 3.0);
}

TEST_CASE("quantum ensemble reproduces <L>_0 at the reference point") {
  RotorParams p;
  const BathPair b{2.0, 5.0, NoiseModel::QuantumColored};
  const auto e = run_ensemble(p, b, DriveSpec{}, small_sim(1e-3, 1 << 17, 64, 2024));
  CHECK(sigmas(e.estimates.at("L"), angular_momentum_quantum(p, b)) < 3.0);
  CHECK(sigmas(e.estimates.at("M_xi"), noise_torque_quantum(p, b)) < 3.0);
  CHECK(sigmas(e.first_half.at("L"), e.second_half.at("L")) < 3.0);
}

TEST_CASE("ensembles are reproducible across execution modes and thread counts") {
  RotorParams p;
  const BathPair b{2.0, 5.0, NoiseModel::QuantumColored};
  auto cfg = small_sim(1e-3, 1 << 12, 12, 99);
  const auto serial = run_ensemble(p, b, DriveSpec{0.5, 0.7}, cfg, Execution::Serial);
  for (int threads : {1, 3, 8}) {
    cfg.threads = threads;
    const auto par = run_ensemble(p, b, DriveSpec{0.5, 0.7}, cfg, Execution::OpenMP);
    for (const auto& [name, est] : serial.estimates) {
      CHECK(par.estimates.at(name).mean == est.mean);
      CHECK(par.estimates.at(name).std_error == est.std_error);
    }
  }
  cfg.master_seed = 100;
  const auto other = run_ensemble(p, b, DriveSpec{0.5, 0.7}, cfg);
  CHECK(other.estimates.at("L").mean != serial.estimates.at("L").mean);
}

TEST_CASE("standard errors") {
  RotorParams p;
  const BathPair b{1.0, 3.0, NoiseModel::ClassicalWhite};
  const auto one = run_ensemble(p, b, DriveSpec{}, small_sim(1e-2, 1 << 10, 1, 1));
  CHECK_FALSE(one.estimates.at("L").std_error.has_value());
  const auto e200 = run_ensemble(p, b, DriveSpec{}, small_sim(1e-2, 1 << 12, 200, 1));
  const auto e400 = run_ensemble(p, b, DriveSpec{}, small_sim(1e-2, 1 << 12, 400, 2));
  const double ratio = *e400.estimates.at("L").std_error / *e200.estimates.at("L").std_error;
  CHECK(std::abs(ratio * std::sqrt(2.0) - 1.0) < 0.2);
  CHECK(e400.estimates.at("L").n_samples > 0);
}

TEST_CASE("rigid-body diagnostic basics") {
  RotorParams p;
  const BathPair b{1.0, 4.0, NoiseModel::ClassicalWhite};
  auto cfg = small_sim(1e-2, 1 << 13, 200, 12);

  p.alpha = 0.0;
  const auto sym = rigid_body_diagnostic(p, b, cfg);
  CHECK(sigmas(sym.mean_of_ratio, 0.0) < 3.0);
  CHECK(sigmas(sym.ratio_of_means, 0.0) < 3.0);

  p.alpha = kPi / 4;
  const auto fwd = rigid_body_diagnostic(p, b, cfg);
  const auto rev = rigid_body_diagnostic(p, BathPair{4.0, 1.0, NoiseModel::ClassicalWhite}, cfg);
  CHECK(fwd.mean_of_ratio.mean > 0.0);
  CHECK(fwd.ratio_of_means.mean > 0.0);
  CHECK(rev.mean_of_ratio.mean < 0.0);
  CHECK(rev.ratio_of_means.mean < 0.0);
  CHECK(fwd.excluded_fraction == 0.0);

  CHECK_THROWS_AS(rigid_body_diagnostic(p, BathPair{1.0, 4.0, NoiseModel::QuantumColored}, cfg),
                  Error);
  cfg.ratio_epsilon = 1e6;
  CHECK_THROWS_AS(rigid_body_diagnostic(p, b, cfg), InsufficientSamples);
  // Without rigid_body the ratio is not tracked.
  cfg.ratio_epsilon = 1e-12;
  const auto plain = run_ensemble(p, b, DriveSpec{}, cfg);
  CHECK(plain.estimates.count("L_over_r2") == 0);
  CHECK_THROWS_AS(rigid_body_from_ensemble(plain), InsufficientSamples);
}

TEST_CASE("observable names") {
  for (auto o : kAllObservables) CHECK(observable_from_name(observable_name(o)) == o);
  CHECK_THROWS_AS(observable_from_name("spin"), Error);
}

TEST_CASE("simulation settings are validated") {
  SimConfig s;
  CHECK_NOTHROW(s.validate());
  s.n_steps = 1000;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SimConfig{};
  s.burn_in_fraction = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SimConfig{};
  s.n_traj = 0;
  CHECK_THROWS_AS(s.validate(), Error);
}
