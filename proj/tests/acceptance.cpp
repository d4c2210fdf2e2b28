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
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. "acceptance 3 5" runs a subset.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rotor_lab/errors.hpp"
#include "rotor_lab/exact_observables.hpp"
#include "rotor_lab/langevin.hpp"
#include "rotor_lab/spectral_noise.hpp"
#include "support/oracles.hpp"

using namespace rotor_lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

RotorParams fig1(double alpha = kPi / 4) {
  RotorParams p;
  p.alpha = alpha;
  return p;
}

BathPair scaled(double theta) { return {2 * theta, 5 * theta, NoiseModel::QuantumColored}; }

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return v;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

// 1. Classical closed form against two independent routes.
Outcome classical_closed_form() {
  const auto p = fig1();
  const BathPair b{2.0, 5.0, NoiseModel::ClassicalWhite};
  const double L = angular_momentum_classical(p, b);
  const auto c = oracle::stiffness(p);
  auto integrand = [&](double w) {
    const std::complex<double> q(p.m * w * w, w * p.eta);
    return w * w / std::norm((c[0] - q) * (c[1] - q) - c[2] * c[2]);
  };
  const double brute = -4.0 * p.m * p.eta * p.eta * c[2] * (b.T1 - b.T2) *
                       oracle::brute_force_line_integral(integrand);
  const double lyap = oracle::classical_moments(p, b.T1, b.T2).L;
  const double e = std::abs(L / 1.469388 - 1.0);
  return {e < 1e-6 && rel(L, brute) < 1e-6 && rel(L, lyap) < 1e-6,
          fmt("L_cl=%.10f rel.err vs 1.469388 %.1e, quadrature %.1e, Lyapunov %.1e", L, e,
              rel(L, brute), rel(L, lyap))};
}

// 2. Overdamped limit.
Outcome overdamped_limit() {
  auto p = fig1();
  const BathPair b{2.0, 5.0, NoiseModel::ClassicalWhite};
  const double target = overdamped_friction_torque(p, b);
  p.m = 1e-6;
  const double got = p.eta / p.m * angular_momentum_classical(p, b);
  const double e = std::abs(got / target - 1.0);
  return {e < 1e-4 && std::abs(target - 1.8) < 1e-12,
          fmt("friction torque %.12f, (eta/m) L_cl at m=1e-6 %.12f, rel.err %.1e", target, got, e)};
}

// 3. Quadrature against residues on a 5 x 5 (theta, alpha) grid.
Outcome method_equivalence() {
  double worst = 0.0;
  for (double theta : geomspace(0.01, 100.0, 5)) {
    for (double alpha : {0.2, 0.6, 1.0, 2.0, 2.8}) {
      const auto p = fig1(alpha);
      const auto b = scaled(theta);
      worst = std::max(worst, rel(angular_momentum_quantum(p, b, {}, Method::Quadrature),
                                  angular_momentum_quantum(p, b, {}, Method::Residues)));
      worst = std::max(worst, rel(noise_torque_quantum(p, b, {}, Method::Quadrature),
                                  noise_torque_quantum(p, b, {}, Method::Residues)));
    }
  }
  return {worst < 1e-8, fmt("largest relative difference %.2e over 50 values", worst)};
}

// 4. Exact zeros at equilibrium and for rotational symmetry.
Outcome equilibrium_nulls() {
  double worst = 0.0;
  auto check = [&](const RotorParams& p, const BathPair& b) {
    const double L = angular_momentum_quantum(p, b);
    const double M = noise_torque_quantum(p, b);
    const double L_res = angular_momentum_quantum(p, b, {}, Method::Residues);
    const double M_res = noise_torque_quantum(p, b, {}, Method::Residues);
    const double dq = heat_transfer_difference(p, L, DriveSpec{});
    for (double v : {L, M, L_res, M_res, dq}) worst = std::max(worst, std::abs(v));
  };
  for (double T : {0.01, 0.3, 1.0, 7.0, 100.0}) check(fig1(), BathPair{T, T});
  // alpha = pi/2 is left out: in double precision sin(2 alpha) is 1.2e-16, so
  // C is small but not zero and the observables scale with it.
  for (double theta : {0.01, 1.0, 100.0}) {
    check(fig1(0.0), scaled(theta));
    auto iso = fig1();
    iso.u2 = iso.u1;
    check(iso, scaled(theta));
  }
  return {worst < 1e-14, fmt("largest |value| %.1e over 11 parameter sets", worst)};
}

// 5. Approach to the classical curve.
Outcome classical_convergence() {
  const auto grid = geomspace(0.1, 100.0, 16);
  std::vector<double> gaps;
  for (double theta : grid) {
    const auto b = scaled(theta);
    gaps.push_back(std::abs(angular_momentum_quantum(fig1(), b) /
                                angular_momentum_classical(fig1(), b) -
                            1.0));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
  // Crossover: first theta on a fine grid with the gap below 1%.
  double theta_star = NAN;
  for (double theta : geomspace(0.1, 100.0, 301)) {
    const auto b = scaled(theta);
    if (std::abs(angular_momentum_quantum(fig1(), b) / angular_momentum_classical(fig1(), b) -
                 1.0) < 0.01) {
      theta_star = theta;
      break;
    }
  }
  return {monotone && gaps.back() < 0.01,
          fmt("gap %.3e at theta=0.1, %.3e at theta=100, monotone=%s; 1%% crossover at theta=%.3g",
              gaps.front(), gaps.back(), monotone ? "yes" : "no", theta_star)};
}

// 6. Sign laws over the figure grids.
Outcome sign_laws() {
  int points = 0, bad = 0;
  auto check = [&](const RotorParams& p, const BathPair& b) {
    const double C = build_coefficients(p).C;
    const double L = angular_momentum_quantum(p, b);
    const double M = noise_torque_quantum(p, b);
    const double s = C * (b.T2 - b.T1);
    ++points;
    if (std::abs(C) < 1e-12) {
      if (std::abs(L) > 1e-14 || std::abs(M) > 1e-14) ++bad;
      return;
    }
    if ((L > 0) != (s > 0) || L == 0.0 || (M > 0) == (L > 0) || M == 0.0) ++bad;
  };
  for (double theta : geomspace(0.01, 100.0, 41)) check(fig1(), scaled(theta));
  for (double alpha : linspace(0.0, kPi, 37)) check(fig1(alpha), scaled(0.1));
  for (double alpha : linspace(0.0, kPi, 37)) check(fig1(alpha), scaled(1.0));
  return {bad == 0, fmt("%d violations at %d grid points", bad, points)};
}

// 7. Energy balance, the heat-difference identity, and sign constraints.
Outcome thermodynamic_identities() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.2, 3.0), a(0.0, kPi), T(0.05, 10.0), w(-5.0, 5.0);
  double worst_balance = 0.0, worst_identity = 0.0;
  int negative_work = 0, pump = 0, pump_points = 0;
  for (int k = 0; k < 50; ++k) {
    RotorParams p;
    p.m = u(rng);
    p.eta = u(rng);
    p.u1 = u(rng);
    p.u2 = u(rng);
    p.alpha = a(rng);
    const BathPair b{T(rng), T(rng), NoiseModel::QuantumColored};
    const DriveSpec d{u(rng), w(rng)};
    const double L0 = angular_momentum_quantum(p, b);
    const auto r = heat_rates(p, L0, d);
    const double rw = work_rate(p, d);
    worst_balance = std::max(worst_balance, std::abs(r.r_q1 + r.r_q2 + rw) /
                                                (std::abs(r.r_q1) + std::abs(r.r_q2) + rw));
    const auto c = build_coefficients(p);
    const double a0 = c.A - p.m * d.omega0 * d.omega0, b0 = c.B - p.m * d.omega0 * d.omega0;
    const double dw = d.D * d.omega0;
    const double direct = -c.C / p.m * L0 + 0.5 * p.eta * dw * dw *
                                                (a0 * a0 - b0 * b0 - 4 * c.C * p.eta * d.omega0) /
                                                std::norm(response_denominator(d.omega0, p, c));
    const double dq = heat_transfer_difference(p, L0, d);
    worst_identity = std::max(worst_identity, std::abs(dq - direct) /
                                                  std::max(std::abs(direct), 1e-300));
    if (rw < 0.0) ++negative_work;
    if (b.T2 > b.T1) {
      ++pump_points;
      if (r.r_q1 > 0.0) ++pump;
    }
  }
  // Figure grids: theta sweep at D = 1 over the drive-frequency range.
  for (double theta : geomspace(0.01, 100.0, 21)) {
    const double L0 = angular_momentum_quantum(fig1(), scaled(theta));
    for (double w0 : linspace(-3.0, 3.0, 61)) {
      const DriveSpec d{1.0, w0};
      ++pump_points;
      if (heat_rates(fig1(), L0, d).r_q1 > 0.0) ++pump;
      if (work_rate(fig1(), d) < 0.0) ++negative_work;
    }
  }
  const bool ok = worst_balance < 1e-9 && worst_identity < 1e-9 && negative_work == 0 && pump == 0;
  return {ok, fmt("balance %.1e, heat-difference identity %.1e, r_w<0 at %d points, r_q1>0 at "
                  "%d of %d points with T2>T1",
                  worst_balance, worst_identity, negative_work, pump, pump_points)};
}

// 8. Simulation against the exact values at desk scale.
Outcome simulation_agreement() {
  struct Point {
    std::string label;
    RotorParams p;
    BathPair b;
  };
  std::vector<Point> points;
  for (double theta : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    points.push_back({fmt("theta=%g", theta), fig1(), scaled(theta)});
  }
  for (double alpha : {kPi / 8, kPi / 4, 3 * kPi / 8, 5 * kPi / 8, 3 * kPi / 4}) {
    points.push_back({fmt("alpha=%.4f", alpha), fig1(alpha), scaled(0.1)});
  }
  SimConfig base;
  base.dt = 1e-3;
  base.n_steps = 1 << 18;
  base.n_traj = 1000;
  int total = 0, within = 0, moved = 0;
  std::string notes;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    SimConfig cfg = base;
    cfg.master_seed = 1000 + i;
    const auto coarse = run_ensemble(pt.p, pt.b, DriveSpec{}, cfg);
    SimConfig half = cfg;
    half.dt = cfg.dt / 2;
    half.n_steps = cfg.n_steps * 2;
    half.master_seed = 2000 + i;
    const auto fine = run_ensemble(pt.p, pt.b, DriveSpec{}, half);
    const double exact_L = angular_momentum_quantum(pt.p, pt.b);
    const double exact_M = noise_torque_quantum(pt.p, pt.b);
    for (const auto& [name, exact] : {std::pair{"L", exact_L}, std::pair{"M_xi", exact_M}}) {
      const auto& e = coarse.estimates.at(name);
      const auto& f = fine.estimates.at(name);
      const double z = (e.mean - exact) / *e.std_error;
      const double zdt = (f.mean - e.mean) / std::hypot(*e.std_error, *f.std_error);
      ++total;
      if (std::abs(z) <= 3.0) ++within;
      if (std::abs(zdt) >= 3.0) ++moved;
      std::printf("  %-14s %-5s exact % .6e  sim % .6e +- %.2e  z % .2f  dt/2 shift %.2f sigma\n",
                  pt.label.c_str(), name, exact, e.mean, *e.std_error, z, zdt);
      std::fflush(stdout);
    }
  }
  const bool ok = 10 * within >= 9 * total && moved == 0;
  return {ok, fmt("%d of %d within 3 sigma (need 90%%); %d dt-halving shifts >= 3 sigma", within,
                  total, moved)};
}

// 9. Noise synthesis fidelity.
Outcome noise_fidelity() {
  const double T = 2.0, eta = 1.0, hbar = 1.0, dt = 1e-3;
  const std::uint64_t n = 1 << 12;
  const int traces = 1000;
  std::vector<double> sum(n / 2 + 1, 0.0), sum_sq(n / 2 + 1, 0.0), omega;
  for (int t = 0; t < traces; ++t) {
    const auto spec =
        periodogram(synthesize_quantum_trace(T, eta, hbar, dt, n, StreamId{77, std::uint64_t(t), 0}));
    omega = spec.omega;
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
      sum[k] += spec.power[k];
      sum_sq[k] += spec.power[k] * spec.power[k];
    }
  }
  int pass = 0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const double mean = sum[k] / traces;
    const double se = std::sqrt((sum_sq[k] / traces - mean * mean) / (traces - 1));
    if (std::abs(mean - bath_psd(omega[k], T, eta, hbar)) <= 3.0 * se) ++pass;
  }
  const double frac = static_cast<double>(pass) / sum.size();

  double s2 = 0.0;
  std::uint64_t count = 0;
  for (int t = 0; t < traces; ++t) {
    for (double v : synthesize_white_trace(T, eta, dt, n, StreamId{78, std::uint64_t(t), 0}).values) {
      s2 += v * v;
      ++count;
    }
  }
  const double var_err = std::abs(s2 / count / (2 * eta * T / dt) - 1.0);
  return {frac >= 0.95 && var_err < 0.01,
          fmt("periodogram within 3 SE at %.1f%% of %zu bins; white variance rel.err %.2e",
              100 * frac, sum.size(), var_err)};
}

// 10. Rigid-body diagnostic.
Outcome rigid_body() {
  RotorParams p = fig1();
  const BathPair b{1.0, 4.0, NoiseModel::ClassicalWhite};
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_steps = 1 << 16;
  cfg.n_traj = 1000;
  cfg.master_seed = 31337;
  const auto d = rigid_body_diagnostic(p, b, cfg);
  const double z = d.difference.mean / *d.difference.std_error;
  p.alpha = 0.0;
  cfg.master_seed = 31338;
  const auto s = rigid_body_diagnostic(p, b, cfg);
  const double z1 = s.mean_of_ratio.mean / *s.mean_of_ratio.std_error;
  const double z2 = s.ratio_of_means.mean / *s.ratio_of_means.std_error;
  return {std::abs(z) > 5.0 && std::abs(z1) <= 3.0 && std::abs(z2) <= 3.0,
          fmt("alpha=pi/4: <L/r2>=%.4f+-%.4f, <L>/<r2>=%.4f+-%.4f, difference %.1f sigma; "
              "alpha=0: %.2f and %.2f sigma from 0",
              d.mean_of_ratio.mean, *d.mean_of_ratio.std_error, d.ratio_of_means.mean,
              *d.ratio_of_means.std_error, z, z1, z2)};
}

// 11. Arrest frequency and oddness of the driven part.
Outcome arrest() {
  const auto p = fig1();
  const auto b = scaled(1.0);
  const double D = 2.0;
  const double L0 = angular_momentum_quantum(p, b);
  const double w0 = arrest_frequency(p, b, D);
  const double total = driven_angular_momentum(p, L0, DriveSpec{D, w0}).L_total;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x = w(rng);
    const double plus = driven_angular_momentum(p, 0.0, DriveSpec{D, x}).L_drive;
    const double minus = driven_angular_momentum(p, 0.0, DriveSpec{D, -x}).L_drive;
    worst = std::max(worst, std::abs(plus + minus) / std::abs(plus));
  }
  const double residual = std::abs(total) / std::abs(L0);
  return {residual < 1e-9 && worst < 1e-12,
          fmt("D=%g: w0*=%.10f, |L_total|/|L0|=%.1e; oddness error %.1e", D, w0, residual, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"classical closed form", classical_closed_form},
      {"overdamped limit", overdamped_limit},
      {"quadrature and residues agree", method_equivalence},
      {"equilibrium and symmetry nulls", equilibrium_nulls},
      {"classical-limit convergence", classical_convergence},
      {"sign laws", sign_laws},
      {"thermodynamic identities", thermodynamic_identities},
      {"simulation vs exact values", simulation_agreement},
      {"noise synthesis fidelity", noise_fidelity},
      {"rigid-body diagnostic", rigid_body},
      {"arrest frequency", arrest},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s (%s) [%.1fs]\n", id, out.pass ? "PASS" : "FAIL",
                criteria[i].first, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
