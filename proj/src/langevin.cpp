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
#include "rotor_lab/langevin.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>

#include "rotor_lab/errors.hpp"
#include "rotor_lab/spectral_noise.hpp"

namespace rotor_lab {

namespace {

bool finite(const PhaseState& s) {
  return std::isfinite(s.x1) && std::isfinite(s.x2) && std::isfinite(s.v1) &&
         std::isfinite(s.v2);
}

std::vector<double> per_trajectory(const std::vector<TrajectoryAccumulator>& trajs,
                                   Observable o, int which) {
  std::vector<double> out;
  out.reserve(trajs.size());
  for (const auto& t : trajs) {
    const auto& s = t[o];
    out.push_back(which == 0 ? s.mean() : which == 1 ? s.first_mean() : s.second_mean());
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("sim dt must be positive");
  if (n_steps < 2 || !is_power_of_two(n_steps)) {
    throw Error("sim n_steps must be a power of two >= 2");
  }
  if (n_traj < 1) throw Error("sim n_traj must be at least 1");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
    throw Error("sim burn_in_fraction must lie in [0, 1)");
  }
  if (!(ratio_epsilon >= 0.0)) throw Error("sim ratio_epsilon must be nonnegative");
  if (threads < 0) throw Error("sim threads must be nonnegative");
  const auto kept = n_steps - static_cast<std::uint64_t>(burn_in_fraction * n_steps);
  if (kept < 2) throw Error("sim burn-in leaves fewer than two samples");
}

std::array<double, 2> total_force(double x1, double x2, double t,
                                  const PotentialCoefficients& coeffs, const DriveSpec& drive) {
  std::array<double, 2> f{-(coeffs.A * x1 + coeffs.C * x2), -(coeffs.C * x1 + coeffs.B * x2)};
  if (drive.D != 0.0) {
    f[0] += drive.D * std::cos(drive.omega0 * t);
    f[1] += drive.D * std::sin(drive.omega0 * t);
  }
  return f;
}

State make_state(const PhaseState& phase, const PotentialCoefficients& coeffs,
                 const DriveSpec& drive, double t) {
  State s{phase, 0.0, 0.0};
  const auto f = total_force(phase.x1, phase.x2, t, coeffs, drive);
  s.f1 = f[0];
  s.f2 = f[1];
  return s;
}

State step(const State& state, double xi1, double xi2, const RotorParams& params,
           const PotentialCoefficients& coeffs, const DriveSpec& drive, double t, double dt) {
  const double m = params.m;
  const double h = params.eta * dt / (2.0 * m);
  const double b = 1.0 / (1.0 + h);
  const double a = (1.0 - h) * b;
  const double beta1 = xi1 * dt;
  const double beta2 = xi2 * dt;
  const auto& p = state.phase;

  State next;
  next.phase.x1 = p.x1 + b * dt * p.v1 + b * dt * dt / (2.0 * m) * state.f1 +
                  b * dt / (2.0 * m) * beta1;
  next.phase.x2 = p.x2 + b * dt * p.v2 + b * dt * dt / (2.0 * m) * state.f2 +
                  b * dt / (2.0 * m) * beta2;
  const auto f = total_force(next.phase.x1, next.phase.x2, t + dt, coeffs, drive);
  next.f1 = f[0];
  next.f2 = f[1];
  next.phase.v1 = a * p.v1 + dt / (2.0 * m) * (a * state.f1 + next.f1) + b / m * beta1;
  next.phase.v2 = a * p.v2 + dt / (2.0 * m) * (a * state.f2 + next.f2) + b / m * beta2;
  if (!finite(next.phase)) {
    std::ostringstream msg;
    msg << "non-finite state at t=" << t + dt << " (dt=" << dt << " may be too large)";
    throw NonFiniteState(msg.str());
  }
  return next;
}

double mechanical_energy(const PhaseState& s, const RotorParams& params,
                         const PotentialCoefficients& coeffs) {
  const double kinetic = 0.5 * params.m * (s.v1 * s.v1 + s.v2 * s.v2);
  const double potential =
      0.5 * (coeffs.A * s.x1 * s.x1 + 2.0 * coeffs.C * s.x1 * s.x2 + coeffs.B * s.x2 * s.x2);
  return kinetic + potential;
}

std::string observable_name(Observable o) {
  switch (o) {
    case Observable::L: return "L";
    case Observable::M_xi: return "M_xi";
    case Observable::I: return "I";
    case Observable::r2: return "r2";
    case Observable::L_over_r2: return "L_over_r2";
    case Observable::r_q1: return "r_q1";
    case Observable::r_q2: return "r_q2";
    case Observable::r_w: return "r_w";
  }
  throw std::logic_error("unknown observable");
}

Observable observable_from_name(const std::string& name) {
  for (auto o : kAllObservables) {
    if (observable_name(o) == name) return o;
  }
  throw Error("unknown observable '" + name + "'");
}

void RunningSum::add(double value, bool first) {
  sum += value;
  sum_sq += value * value;
  ++count;
  if (first) {
    first_half += value;
    ++first_count;
  } else {
    second_half += value;
    ++second_count;
  }
}

double RunningSum::first_mean() const {
  return first_count > 0 ? first_half / static_cast<double>(first_count) : 0.0;
}

double RunningSum::second_mean() const {
  return second_count > 0 ? second_half / static_cast<double>(second_count) : 0.0;
}

double RunningSum::sample_variance() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double mu = sum / n;
  return std::max(0.0, (sum_sq - n * mu * mu) / (n - 1.0));
}

TrajectoryAccumulator simulate_trajectory(const RotorParams& params, const BathPair& baths,
                                          const DriveSpec& drive, const SimConfig& cfg,
                                          std::uint64_t traj_index) {
  cfg.validate();
  baths.validate(params);
  drive.validate();
  const auto coeffs = build_coefficients(params);
  const double dt = cfg.dt;
  const std::uint64_t n = cfg.n_steps;

  const bool white = uses_classical_kernels(params, baths);
  auto make_trace = [&](double T, std::uint32_t bath) {
    const StreamId id{cfg.master_seed, traj_index, bath};
    return white ? synthesize_white_trace(T, params.eta, dt, n, id)
                 : synthesize_quantum_trace(T, params.eta, params.hbar, dt, n, id);
  };
  const auto xi1 = make_trace(baths.T1, 0);
  const auto xi2 = make_trace(baths.T2, 1);

  const auto burn = static_cast<std::uint64_t>(cfg.burn_in_fraction * static_cast<double>(n));
  const std::uint64_t split = burn + (n - burn) / 2;
  const double m = params.m;
  const double eta = params.eta;
  const double eps = cfg.ratio_epsilon;

  TrajectoryAccumulator acc;
  State state = make_state(cfg.initial, coeffs, drive, 0.0);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double n1 = xi1.values[k];
    const double n2 = xi2.values[k];
    const State next = step(state, n1, n2, params, coeffs, drive, t, dt);
    if (k >= burn) {
      const bool first = k < split;
      const auto& x = state.phase;
      const auto& y = next.phase;
      const double u1 = (y.x1 - x.x1) / dt;
      const double u2 = (y.x2 - x.x2) / dt;
      const double xm1 = 0.5 * (x.x1 + y.x1);
      const double xm2 = 0.5 * (x.x2 + y.x2);
      const double cross = x.x1 * y.x2 - x.x2 * y.x1;
      const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
      acc[Observable::L].add(m * cross / dt, first);
      acc[Observable::M_xi].add(xm1 * n2 - xm2 * n1, first);
      acc[Observable::I].add(m * r2, first);
      acc[Observable::r2].add(r2, first);
      if (cfg.rigid_body) {
        const double r2_next = y.x1 * y.x1 + y.x2 * y.x2;
        if (r2 < eps || r2_next < eps) {
          ++acc.ratio_excluded;
        } else {
          const double dot = x.x1 * y.x1 + x.x2 * y.x2;
          acc[Observable::L_over_r2].add(m * std::atan2(cross, dot) / dt, first);
        }
      }
      acc[Observable::r_q1].add(u1 * (-eta * u1 + n1), first);
      acc[Observable::r_q2].add(u2 * (-eta * u2 + n2), first);
      double rw = 0.0;
      if (drive.D != 0.0) {
        const double th = drive.omega0 * (t + 0.5 * dt);
        const double dw = drive.D * drive.omega0;
        rw = -(xm1 * (-dw * std::sin(th)) + xm2 * (dw * std::cos(th)));
      }
      acc[Observable::r_w].add(rw, first);
    }
    state = next;
  }
  acc.final_state = state.phase;
  return acc;
}

ObservableEstimate estimate_from_samples(const std::vector<double>& values,
                                         std::uint64_t n_samples) {
  ObservableEstimate est;
  est.n_samples = n_samples;
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

EnsembleResult run_ensemble(const RotorParams& params, const BathPair& baths,
                            const DriveSpec& drive, const SimConfig& cfg, Execution execution) {
  cfg.validate();
  params.validate();
  baths.validate(params);
  drive.validate();
  const auto n_traj = static_cast<std::int64_t>(cfg.n_traj);

  EnsembleResult result;
  result.trajectories.resize(cfg.n_traj);
  if (execution == Execution::Serial) {
    for (std::int64_t i = 0; i < n_traj; ++i) {
      result.trajectories[i] = simulate_trajectory(params, baths, drive, cfg, i);
    }
  } else {
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < n_traj; ++i) {
      try {
        result.trajectories[i] = simulate_trajectory(params, baths, drive, cfg, i);
      } catch (...) {
#pragma omp critical(rotor_lab_ensemble_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (auto o : kAllObservables) {
    if (o == Observable::L_over_r2 && !cfg.rigid_body) continue;
    std::uint64_t total = 0;
    std::uint64_t first = 0;
    std::uint64_t second = 0;
    for (const auto& t : result.trajectories) {
      total += t[o].count;
      first += t[o].first_count;
      second += t[o].second_count;
    }
    const auto name = observable_name(o);
    result.estimates[name] = estimate_from_samples(per_trajectory(result.trajectories, o, 0), total);
    result.first_half[name] =
        estimate_from_samples(per_trajectory(result.trajectories, o, 1), first);
    result.second_half[name] =
        estimate_from_samples(per_trajectory(result.trajectories, o, 2), second);
  }
  for (const auto& t : result.trajectories) {
    result.ratio_excluded += t.ratio_excluded;
    result.ratio_samples += t.ratio_excluded + t[Observable::L_over_r2].count;
  }
  return result;
}

RigidBodyDiagnostic rigid_body_from_ensemble(const EnsembleResult& ensemble) {
  const auto& trajs = ensemble.trajectories;
  if (trajs.empty() || !ensemble.estimates.contains("L_over_r2")) {
    throw InsufficientSamples("rigid-body diagnostic needs an ensemble run with rigid_body set");
  }
  RigidBodyDiagnostic out;
  out.excluded_fraction =
      ensemble.ratio_samples > 0
          ? static_cast<double>(ensemble.ratio_excluded) / static_cast<double>(ensemble.ratio_samples)
          : 1.0;
  if (out.excluded_fraction > 0.01) {
    std::ostringstream msg;
    msg << "L/r^2 excluded " << 100.0 * out.excluded_fraction << "% of samples (limit 1%)";
    throw InsufficientSamples(msg.str());
  }
  const auto ratio = per_trajectory(trajs, Observable::L_over_r2, 0);
  const auto ell = per_trajectory(trajs, Observable::L, 0);
  const auto r2 = per_trajectory(trajs, Observable::r2, 0);
  const auto n_ratio = ensemble.estimates.at("L_over_r2").n_samples;
  const auto n_l = ensemble.estimates.at("L").n_samples;

  out.mean_of_ratio = estimate_from_samples(ratio, n_ratio);
  const auto mean_l = estimate_from_samples(ell, n_l);
  const auto mean_r2 = estimate_from_samples(r2, n_l);
  const double R = mean_l.mean / mean_r2.mean;

  // Delta method: linearize <L>/<r2> around the ensemble means.
  std::vector<double> lin(trajs.size());
  std::vector<double> diff(trajs.size());
  for (std::size_t j = 0; j < trajs.size(); ++j) {
    const double z = (ell[j] - R * r2[j]) / mean_r2.mean;
    lin[j] = R + z;
    diff[j] = ratio[j] - z;
  }
  out.ratio_of_means = estimate_from_samples(lin, n_l);
  out.ratio_of_means.mean = R;
  out.difference = estimate_from_samples(diff, n_ratio);
  out.difference.mean = out.mean_of_ratio.mean - R;
  return out;
}

RigidBodyDiagnostic rigid_body_diagnostic(const RotorParams& params, const BathPair& baths,
                                          const SimConfig& cfg, Execution execution) {
  if (!uses_classical_kernels(params, baths)) {
    throw Error("rigid-body diagnostic uses the classical white-noise model");
  }
  SimConfig tracked = cfg;
  tracked.rigid_body = true;
  return rigid_body_from_ensemble(run_ensemble(params, baths, DriveSpec{}, tracked, execution));
}

}  // namespace rotor_lab
