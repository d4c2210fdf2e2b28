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
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "rotor_lab/errors.hpp"
#include "rotor_lab/exact_observables.hpp"

namespace rotor_lab {

namespace {

constexpr int kCirclePoints = 128;
constexpr int kInitialTerms = 64;
// Oscillator poles closer than this fraction of their distance to the nearest
// Matsubara pole are summed together on one circle.
constexpr double kClusterFraction = 0.04;

struct Setup {
  const RotorParams& params;
  PotentialCoefficients coeffs;
  double T1;
  double T2;
  double scale;  // typical frequency, for the degeneracy guard
  std::vector<Complex> poles;
};

double matsubara_spacing(const Setup& s, double T) { return 2.0 * kPi * T / s.params.hbar; }

// Distance from z to the nearest pole of G (both baths, p >= 1).
double matsubara_distance(const Setup& s, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (double T : {s.T1, s.T2}) {
    const double nu = matsubara_spacing(s, T);
    const double pc = std::max(1.0, std::round(z.imag() / nu));
    for (double p = std::max(1.0, pc - 1.0); p <= pc + 1.0; p += 1.0) {
      best = std::min(best, std::abs(z - Complex{0.0, p * nu}));
    }
  }
  return best;
}

// Z(-w) = m^2 prod_k (w - p_k) over the four upper-half-plane poles p_k and
// Z(w) = m^2 prod_k (w + p_k). The factored forms keep full relative accuracy
// next to a (near) double pole, where the expanded polynomial cancels.
Complex z_factored(const Setup& s, Complex w, double sign) {
  Complex out{s.params.m * s.params.m, 0.0};
  for (const auto& p : s.poles) out *= w + sign * p;
  return out;
}

// Z(+-i nu) for nu on the positive imaginary axis; both are real.
double z_plus(const Setup& s, double nu) { return z_factored(s, {0.0, nu}, 1.0).real(); }
double z_minus(const Setup& s, double nu) { return z_factored(s, {0.0, nu}, -1.0).real(); }

// i * Res of the integrand at the Matsubara poles of index p (continuous p
// for the remainder integral).
double matsubara_bath_term(SeriesObservable obs, const Setup& s, int bath, double p) {
  const double T = bath == 0 ? s.T1 : s.T2;
  const double sign = bath == 0 ? 1.0 : -1.0;
  const double nu = p * matsubara_spacing(s, T);
  if (obs == SeriesObservable::L0) {
    return sign * T * nu * nu * nu / (z_plus(s, nu) * z_minus(s, nu));
  }
  return -sign * T * nu / z_plus(s, nu);
}

double matsubara_term(SeriesObservable obs, const Setup& s, double p) {
  return matsubara_bath_term(obs, s, 0, p) + matsubara_bath_term(obs, s, 1, p);
}

// w^2 G(w) / (Z(w) Z(-w)).
Complex angular_integrand(const Setup& s, Complex w) {
  const Complex g = thermal_kernel(w, s.T1, s.T2, s.params.hbar);
  return w * w * g / (z_factored(s, w, 1.0) * z_factored(s, w, -1.0));
}

// Roots of m w^2 - i eta w - u = 0, i.e. the zeros of the factor u - m w^2 + i w eta
// of Z(-w). The smaller root comes from the product -u/m when they are
// overdamped, avoiding cancellation.
std::vector<Complex> upper_oscillator_poles(const RotorParams& params) {
  std::vector<Complex> poles;
  const double m = params.m;
  const double eta = params.eta;
  for (double u : {params.u1, params.u2}) {
    const double disc = 4.0 * m * u - eta * eta;
    if (disc >= 0.0) {
      const double re = std::sqrt(disc) / (2.0 * m);
      poles.emplace_back(re, eta / (2.0 * m));
      poles.emplace_back(-re, eta / (2.0 * m));
    } else {
      const double big = (eta + std::sqrt(-disc)) / (2.0 * m);
      poles.emplace_back(0.0, big);
      poles.emplace_back(0.0, u / (m * big));
    }
  }
  return poles;
}

[[noreturn]] void degenerate(const std::string& what) { throw ResidueDegenerate(what); }

struct Singularity {
  Complex z;
  int bath;  // -1 for an oscillator pole, else 0 or 1
  int p;
};

struct OscillatorPart {
  Complex residues;
  // (bath, p) of Matsubara poles already included in a circle integral.
  std::set<std::pair<int, int>> absorbed;
};

// Oscillator poles plus the Matsubara poles around them.
std::vector<Singularity> local_singularities(const Setup& s) {
  std::vector<Singularity> out;
  for (const auto& p : s.poles) out.push_back({p, -1, 0});
  std::set<std::pair<int, int>> seen;
  for (const auto& pole : s.poles) {
    for (int bath = 0; bath < 2; ++bath) {
      const double nu = matsubara_spacing(s, bath == 0 ? s.T1 : s.T2);
      const double pc = std::round(pole.imag() / nu);
      for (double p = std::max(1.0, pc - 3.0); p <= pc + 3.0; p += 1.0) {
        const int ip = static_cast<int>(p);
        if (seen.insert({bath, ip}).second) out.push_back({{0.0, p * nu}, bath, ip});
      }
    }
  }
  return out;
}

// Sum of the residues of the angular-momentum integrand at the zeros of Z(-w)
// in the upper half plane. An oscillator pole that sits close to another
// oscillator pole or to a Matsubara pole is grouped with it, and the group's
// combined residue comes from a circle integral; the individual residues
// would be large and nearly cancel.
OscillatorPart oscillator_residues(const Setup& s, const ResidueConfig& cfg) {
  const auto sing = local_singularities(s);
  const std::size_t n = sing.size();
  const double guard = cfg.degeneracy_guard * s.scale;

  auto dist = [&](std::size_t i, std::size_t j) { return std::abs(sing[i].z - sing[j].z); };
  // Distance from point z to the mirrored zeros of Z(w) in the lower half plane.
  auto mirror_distance = [&](Complex z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : s.poles) best = std::min(best, std::abs(z + p));
    return best;
  };

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  // Grow groups until no oscillator pole is much closer to an outside
  // singularity than that pair is to everything else.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < s.poles.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        if (ri == rj) continue;
        double third = std::min(mirror_distance(sing[i].z), mirror_distance(sing[j].z));
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t rk = find(k);
          if (rk != ri && rk != rj) third = std::min({third, dist(i, k), dist(j, k)});
        }
        if (dist(i, j) < guard || dist(i, j) < kClusterFraction * third) {
          parent[ri] = rj;
          changed = true;
        }
      }
    }
  }

  const Complex i_unit{0.0, 1.0};
  OscillatorPart out;
  for (std::size_t root = 0; root < n; ++root) {
    if (find(root) != root) continue;
    std::vector<std::size_t> members;
    bool has_oscillator = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (find(i) != root) continue;
      members.push_back(i);
      has_oscillator = has_oscillator || sing[i].bath < 0;
    }
    if (!has_oscillator) continue;
    if (members.size() == 1) {
      const Complex z = sing[root].z;
      const Complex g = thermal_kernel(z, s.T1, s.T2, s.params.hbar);
      // d/dw Z(-w) at w = z, from the factored form.
      Complex dz_minus{s.params.m * s.params.m, 0.0};
      for (std::size_t j = 0; j < s.poles.size(); ++j) {
        if (j != root) dz_minus *= z - s.poles[j];
      }
      out.residues += z * z * g / (z_factored(s, z, 1.0) * dz_minus);
      continue;
    }
    Complex centre{};
    for (auto i : members) centre += sing[i].z;
    centre /= static_cast<double>(members.size());
    double spread = 0.0;
    for (auto i : members) spread = std::max(spread, std::abs(sing[i].z - centre));
    double clearance = std::min(mirror_distance(centre), matsubara_distance(s, centre));
    for (std::size_t i = 0; i < n; ++i) {
      if (find(i) != root) clearance = std::min(clearance, std::abs(sing[i].z - centre));
    }
    // matsubara_distance may have picked an absorbed pole; those are inside.
    if (clearance <= spread) {
      clearance = std::numeric_limits<double>::infinity();
      for (int bath = 0; bath < 2; ++bath) {
        const double nu = matsubara_spacing(s, bath == 0 ? s.T1 : s.T2);
        const double pc = std::round(centre.imag() / nu);
        for (double p = std::max(1.0, pc - 4.0); p <= pc + 4.0; p += 1.0) {
          const Complex z{0.0, p * nu};
          if (std::abs(z - centre) > spread) clearance = std::min(clearance, std::abs(z - centre));
        }
      }
      clearance = std::min(clearance, mirror_distance(centre));
      for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != root) clearance = std::min(clearance, std::abs(sing[i].z - centre));
      }
    }
    const double radius = 0.5 * clearance;
    if (!(radius > 8.0 * spread) || radius < guard) {
      std::ostringstream msg;
      msg << "cannot isolate clustered poles near " << centre << " (spread " << spread
          << ", clearance " << clearance << ")";
      degenerate(msg.str());
    }
    // (1 / 2 pi i) \oint F dw by the trapezoidal rule on the circle.
    Complex acc{};
    for (int k = 0; k < kCirclePoints; ++k) {
      const Complex e = std::exp(i_unit * (2.0 * kPi * k / kCirclePoints));
      acc += angular_integrand(s, centre + radius * e) * (radius * e);
    }
    out.residues += acc / static_cast<double>(kCirclePoints);
    for (auto i : members) {
      if (sing[i].bath >= 0) out.absorbed.insert({sing[i].bath, sing[i].p});
    }
  }
  return out;
}

// \int_a^inf term(p) dp, mapped onto (0, 1].
double matsubara_remainder(SeriesObservable obs, const Setup& s, double a, double rel_tol) {
  auto mapped = [&](double t) {
    if (t == 0.0) return 0.0;
    return matsubara_term(obs, s, a / t) * (a / (t * t));
  };
  const auto res = integrate_adaptive<double>(mapped, 0.0, 1.0, 0.01 * rel_tol, 0.0, 4000);
  return res.value;
}

}  // namespace

void ResidueConfig::validate() const {
  if (max_matsubara < kInitialTerms) {
    throw Error("residue max_matsubara must be at least " + std::to_string(kInitialTerms));
  }
  if (!(series_rel_tol > 0.0)) throw Error("residue series_rel_tol must be positive");
  if (!(degeneracy_guard > 0.0)) throw Error("residue degeneracy_guard must be positive");
}

ResidueSum residue_series_sum(SeriesObservable observable, const RotorParams& params,
                              const BathPair& baths, const ResidueConfig& cfg) {
  cfg.validate();
  params.validate();
  baths.validate(params);
  if (uses_classical_kernels(params, baths) || !(baths.T1 > 0.0) || !(baths.T2 > 0.0)) {
    throw Error("the residue route needs quantum kernels with T1, T2 > 0");
  }
  Setup s{params, build_coefficients(params), baths.T1, baths.T2,
          std::max({std::sqrt(params.u1 / params.m), std::sqrt(params.u2 / params.m),
                    params.eta / params.m}),
          upper_oscillator_poles(params)};

  ResidueSum out;
  if (s.coeffs.C == 0.0 || baths.T1 == baths.T2) return out;

  double prefactor = 0.0;
  double base = 0.0;
  std::set<std::pair<int, int>> absorbed;
  if (observable == SeriesObservable::L0) {
    prefactor = -4.0 * params.m * params.eta * params.eta * s.coeffs.C;
    auto part = oscillator_residues(s, cfg);
    absorbed = std::move(part.absorbed);
    const Complex osc = Complex{0.0, 1.0} * part.residues;
    base = osc.real();
    out.imag = prefactor * osc.imag();
  } else {
    prefactor = 2.0 * s.coeffs.C * params.eta;
  }

  // The remainder integral must start beyond every zero of Z(-i nu), which
  // lie at most eta/m up the imaginary axis.
  const double min_spacing = matsubara_spacing(s, std::min(baths.T1, baths.T2));
  const double clear = 2.0 * params.eta / params.m / min_spacing;
  int P = kInitialTerms;
  while (P < clear) P *= 2;
  if (P > cfg.max_matsubara) {
    throw NonConvergent("Matsubara series needs more than max_matsubara explicit terms");
  }

  long double partial = 0.0L;
  auto add_terms = [&](int first, int last) {
    for (int p = first; p <= last; ++p) {
      for (int bath = 0; bath < 2; ++bath) {
        if (!absorbed.contains({bath, p})) partial += matsubara_bath_term(observable, s, bath, p);
      }
    }
  };
  add_terms(1, P);
  double estimate = static_cast<double>(partial) +
                    matsubara_remainder(observable, s, P + 0.5, cfg.series_rel_tol);
  for (;;) {
    const int next = 2 * P;
    if (next > cfg.max_matsubara) {
      std::ostringstream msg;
      msg << "Matsubara series not converged to " << cfg.series_rel_tol << " within "
          << cfg.max_matsubara << " terms";
      throw NonConvergent(msg.str());
    }
    add_terms(P + 1, next);
    P = next;
    const double refined = static_cast<double>(partial) +
                           matsubara_remainder(observable, s, P + 0.5, cfg.series_rel_tol);
    const double change = std::abs(refined - estimate);
    estimate = refined;
    if (change <= cfg.series_rel_tol * std::abs(base + estimate)) break;
  }
  out.value = prefactor * (base + estimate);
  out.matsubara_terms = P;
  return out;
}

}  // namespace rotor_lab
