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
#pragma once

// Trajectory integration of the two-bath rotor with pre-synthesized noise,
// per-trajectory time averages, and ensemble statistics.
//
// Integrator (Gronbech-Jensen/Farago), with b = 1/(1 + eta dt/2m),
// a = (1 - eta dt/2m) b and beta = xi_n dt:
//   x' = x + b dt v + b dt^2/(2m) F(x, t) + b dt/(2m) beta
//   v' = a v + dt/(2m) [a F(x, t) + F(x', t + dt)] + (b/m) beta
// F is the potential force plus the circular drive D (cos w0 t, sin w0 t).
// With eta = 0 this is velocity Verlet.
//
// Sampled per step, from x = x_n, x' = x_{n+1}, u = (x' - x)/dt, mid-point
// xm = (x + x')/2:
//   L      = m (x1 x2' - x2 x1') / dt          (= m xm x u)
//   M_xi   = xm1 xi2 - xm2 xi1
//   I      = m |x|^2,  r2 = |x|^2
//   L/r2   = m * angle(x -> x') / dt           (only with rigid_body set;
//                                               skipped when r2 < eps_r)
//   r_qn   = u_n (-eta u_n + xi_n)
//   r_w    = -xm . fdot(t + dt/2)

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotor_lab/core_model.hpp"

namespace rotor_lab {

struct PhaseState {
  double x1 = 0.0;
  double x2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

struct SimConfig {
  double dt = 1e-3;
  std::uint64_t n_steps = std::uint64_t{1} << 18;
  std::uint64_t n_traj = 1000;
  double burn_in_fraction = 0.1;
  std::uint64_t master_seed = 20240611;
  PhaseState initial;
  /// Track L/r^2 (one atan2 per step); needed by the rigid-body diagnostic.
  bool rigid_body = false;
  /// Samples with r^2 below this are left out of the L/r^2 average.
  double ratio_epsilon = 1e-12;
  /// Worker threads for the OpenMP runner; 0 leaves the OpenMP default.
  int threads = 0;

  void validate() const;
};

/// Integrator state. The force at (x, t) is cached so each step evaluates it once.
struct State {
  PhaseState phase;
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Potential plus drive force at position (x1, x2) and time t.
std::array<double, 2> total_force(double x1, double x2, double t,
                                  const PotentialCoefficients& coeffs, const DriveSpec& drive);

State make_state(const PhaseState& phase, const PotentialCoefficients& coeffs,
                 const DriveSpec& drive, double t);

/// One step from t to t + dt with noise forces (xi1, xi2) held over the step.
/// Throws NonFiniteState if the result is not finite.
State step(const State& state, double xi1, double xi2, const RotorParams& params,
           const PotentialCoefficients& coeffs, const DriveSpec& drive, double t, double dt);

/// Mechanical energy m|v|^2/2 + U(x), without the drive.
double mechanical_energy(const PhaseState& s, const RotorParams& params,
                         const PotentialCoefficients& coeffs);

enum class Observable { L, M_xi, I, r2, L_over_r2, r_q1, r_q2, r_w };
inline constexpr std::array<Observable, 8> kAllObservables = {
    Observable::L,  Observable::M_xi, Observable::I,    Observable::r2,
    Observable::L_over_r2, Observable::r_q1, Observable::r_q2, Observable::r_w};

std::string observable_name(Observable o);
Observable observable_from_name(const std::string& name);

struct RunningSum {
  double sum = 0.0;
  double sum_sq = 0.0;
  double first_half = 0.0;
  double second_half = 0.0;
  std::uint64_t count = 0;
  std::uint64_t first_count = 0;
  std::uint64_t second_count = 0;

  void add(double value, bool first);
  double mean() const { return count > 0 ? sum / static_cast<double>(count) : 0.0; }
  double first_mean() const;
  double second_mean() const;
  /// Sample variance of the individual samples (not of the mean).
  double sample_variance() const;
};

struct TrajectoryAccumulator {
  std::array<RunningSum, kAllObservables.size()> sums{};
  std::uint64_t ratio_excluded = 0;
  PhaseState final_state;

  RunningSum& operator[](Observable o) { return sums[static_cast<std::size_t>(o)]; }
  const RunningSum& operator[](Observable o) const { return sums[static_cast<std::size_t>(o)]; }
};

struct ObservableEstimate {
  double mean = 0.0;
  /// Trajectory-to-trajectory standard error; absent for a single trajectory.
  std::optional<double> std_error;
  std::uint64_t n_samples = 0;
};

/// Integrates one trajectory. Noise for bath n comes from the stream
/// (master_seed, traj_index, n); classical kernels select white noise.
TrajectoryAccumulator simulate_trajectory(const RotorParams& params, const BathPair& baths,
                                          const DriveSpec& drive, const SimConfig& cfg,
                                          std::uint64_t traj_index);

enum class Execution { Serial, OpenMP };

struct EnsembleResult {
  /// Keyed by observable_name; L_over_r2 appears only when it was tracked.
  std::map<std::string, ObservableEstimate> estimates;
  /// Estimates from the first and second halves of the post-burn-in window.
  std::map<std::string, ObservableEstimate> first_half;
  std::map<std::string, ObservableEstimate> second_half;
  std::vector<TrajectoryAccumulator> trajectories;
  std::uint64_t ratio_excluded = 0;
  std::uint64_t ratio_samples = 0;
};

/// Runs n_traj trajectories. Results are merged in trajectory order, so the
/// output is bit-identical for any thread count and for both execution modes.
EnsembleResult run_ensemble(const RotorParams& params, const BathPair& baths,
                            const DriveSpec& drive, const SimConfig& cfg,
                            Execution execution = Execution::OpenMP);

/// Mean and standard error of per-trajectory values.
ObservableEstimate estimate_from_samples(const std::vector<double>& per_trajectory,
                                         std::uint64_t n_samples);

struct RigidBodyDiagnostic {
  ObservableEstimate mean_of_ratio;   // <L/r^2>
  ObservableEstimate ratio_of_means;  // <L>/<r^2>, error by the delta method
  ObservableEstimate difference;      // <L/r^2> - <L>/<r^2>
  double excluded_fraction = 0.0;
};

/// Requires the classical white-noise model; forces rigid_body on. Throws InsufficientSamples when
/// more than 1% of the L/r^2 samples were excluded.
RigidBodyDiagnostic rigid_body_diagnostic(const RotorParams& params, const BathPair& baths,
                                          const SimConfig& cfg,
                                          Execution execution = Execution::OpenMP);

/// Same statistics from an ensemble that has already been run.
RigidBodyDiagnostic rigid_body_from_ensemble(const EnsembleResult& ensemble);

}  // namespace rotor_lab
