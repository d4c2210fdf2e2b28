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
#include "rotor_lab/exact_observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rotor_lab/errors.hpp"

namespace rotor_lab {

namespace {

constexpr double kIdentityTol = 1e-9;

struct DriveTerms {
  double a;   // A - m w0^2
  double b;   // B - m w0^2
  double e;   // w0 eta
  double z2;  // |Z(w0)|^2
};

DriveTerms drive_terms(const RotorParams& params, const PotentialCoefficients& coeffs,
                       double omega0) {
  const double mw2 = params.m * omega0 * omega0;
  DriveTerms t{};
  t.a = coeffs.A - mw2;
  t.b = coeffs.B - mw2;
  t.e = omega0 * params.eta;
  t.z2 = std::norm(response_denominator(omega0, params, coeffs));
  return t;
}

void check_inputs(const RotorParams& params, const BathPair& baths) {
  params.validate();
  baths.validate(params);
}

}  // namespace

double angular_momentum_quantum(const RotorParams& params, const BathPair& baths,
                                const QuadratureConfig& quad_cfg, Method method,
                                const ResidueConfig& residue_cfg) {
  check_inputs(params, baths);
  if (method == Method::Residues) {
    return residue_series_sum(SeriesObservable::L0, params, baths, residue_cfg).value;
  }
  const auto coeffs = build_coefficients(params);
  const double hbar = uses_classical_kernels(params, baths) ? 0.0 : params.hbar;
  auto kernel = [&](double w) {
    const double g = thermal_kernel(w, baths.T1, baths.T2, hbar);
    if (g == 0.0) return 0.0;
    return w * w * g / std::norm(response_denominator(w, params, coeffs));
  };
  const double integral =
      integrate_even_kernel(kernel, cutoff_frequency(params, baths, quad_cfg), quad_cfg);
  return -4.0 * params.m * params.eta * params.eta * coeffs.C * integral;
}

double angular_momentum_classical(const RotorParams& params, const BathPair& baths) {
  params.validate();
  const double du = params.u1 - params.u2;
  const double num = -2.0 * params.m * params.eta * (baths.T1 - baths.T2) * du *
                     std::sin(2.0 * params.alpha);
  const double den = params.m * du * du + 2.0 * params.eta * params.eta * (params.u1 + params.u2);
  return num / den;
}

double overdamped_friction_torque(const RotorParams& params, const BathPair& baths) {
  params.validate();
  return -(baths.T1 - baths.T2) * (params.u1 - params.u2) * std::sin(2.0 * params.alpha) /
         (params.u1 + params.u2);
}

double noise_torque_quantum(const RotorParams& params, const BathPair& baths,
                            const QuadratureConfig& quad_cfg, Method method,
                            const ResidueConfig& residue_cfg) {
  check_inputs(params, baths);
  // The contour closes in the upper half plane with no poles of 1/Z there.
  if (uses_classical_kernels(params, baths)) return 0.0;
  if (method == Method::Residues) {
    return residue_series_sum(SeriesObservable::Mxi, params, baths, residue_cfg).value;
  }
  const auto coeffs = build_coefficients(params);
  // \int dw / Z(w) = 0, so subtracting G(0) = T1 - T2 leaves the integral
  // unchanged while removing the O(T) part that would otherwise cancel.
  auto kernel = [&](double w) -> Complex {
    const double g = thermal_kernel_shifted(w, baths.T1, baths.T2, params.hbar);
    if (g == 0.0) return 0.0;
    return g / response_denominator(w, params, coeffs);
  };
  const Complex integral =
      integrate_full_line(kernel, cutoff_frequency(params, baths, quad_cfg), quad_cfg);
  if (std::abs(integral.imag()) > 1e-9 * std::abs(integral.real()) + 1e-12) {
    std::ostringstream msg;
    msg << "noise-torque integral has imaginary part " << integral.imag()
        << " against real part " << integral.real();
    throw IdentityViolation(msg.str());
  }
  return 2.0 * coeffs.C * params.eta * integral.real();
}

double potential_torque(const RotorParams& params, const BathPair& baths,
                        const QuadratureConfig& quad_cfg) {
  check_inputs(params, baths);
  const auto coeffs = build_coefficients(params);
  const double hbar = uses_classical_kernels(params, baths) ? 0.0 : params.hbar;
  // tau_U = -C <x1^2 - x2^2> - (B - A) <x1 x2>, with each covariance a sum over
  // baths of S_n times products of Green's functions.
  auto kernel = [&](double w) {
    const auto g = greens_functions(w, params, coeffs);
    const double s1 = bath_psd(w, baths.T1, params.eta, hbar);
    const double s2 = bath_psd(w, baths.T2, params.eta, hbar);
    const double bath1 = coeffs.C * (std::norm(g.K1) - std::norm(g.L1)) +
                         (coeffs.B - coeffs.A) * (g.K1 * std::conj(g.L1)).real();
    const double bath2 = coeffs.C * (std::norm(g.K2) - std::norm(g.L2)) +
                         (coeffs.B - coeffs.A) * (g.K2 * std::conj(g.L2)).real();
    return s1 * bath1 + s2 * bath2;
  };
  return -integrate_even_kernel(kernel, cutoff_frequency(params, baths, quad_cfg), quad_cfg);
}

double drive_response(double omega0, const RotorParams& params) {
  const auto coeffs = build_coefficients(params);
  const auto t = drive_terms(params, coeffs, omega0);
  return params.m * (t.a * t.b + t.e * t.e - coeffs.C * coeffs.C) / t.z2;
}

DrivenAngularMomentum driven_angular_momentum(const RotorParams& params, double L0,
                                              const DriveSpec& drive) {
  drive.validate();
  DrivenAngularMomentum out;
  out.L_drive = drive.D * drive.D * drive.omega0 * drive_response(drive.omega0, params);
  out.L_total = L0 + out.L_drive;
  return out;
}

DrivenAngularMomentum driven_angular_momentum(const RotorParams& params,
                                              const BathPair& baths,
                                              const DriveSpec& drive,
                                              const QuadratureConfig& quad_cfg) {
  return driven_angular_momentum(params, angular_momentum_quantum(params, baths, quad_cfg),
                                 drive);
}

double arrest_frequency(const RotorParams& params, const BathPair& baths, double D,
                        std::optional<std::pair<double, double>> bracket,
                        const QuadratureConfig& quad_cfg) {
  if (!(D > 0.0)) throw std::invalid_argument("arrest_frequency requires D > 0");
  const double L0 = angular_momentum_quantum(params, baths, quad_cfg);
  if (L0 == 0.0) throw std::invalid_argument("arrest_frequency requires <L>_0 != 0");
  const double wscale = std::sqrt(std::max(params.u1, params.u2) / params.m);
  const auto [lo0, hi0] = bracket.value_or(std::pair{-10.0 * wscale, 10.0 * wscale});
  if (!(hi0 > lo0)) throw std::invalid_argument("arrest_frequency bracket is empty");

  auto residual = [&](double w0) {
    return L0 + D * D * w0 * drive_response(w0, params);
  };

  constexpr int kScan = 4000;
  double lo = lo0;
  double flo = residual(lo);
  double hi = lo;
  double fhi = flo;
  bool found = flo == 0.0;
  for (int k = 1; k <= kScan && !found; ++k) {
    hi = lo0 + (hi0 - lo0) * k / kScan;
    fhi = residual(hi);
    if (fhi == 0.0 || std::signbit(fhi) != std::signbit(flo)) {
      found = true;
      break;
    }
    lo = hi;
    flo = fhi;
  }
  if (!found) {
    std::ostringstream msg;
    msg << "no sign change of <L>_0 + D^2 w0 K(w0) on [" << lo0 << ", " << hi0
        << "] for D=" << D << " (<L>_0=" << L0 << ")";
    throw NoRootInBracket(msg.str());
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fmid = residual(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

double driven_moment_of_inertia(const RotorParams& params, const DriveSpec& drive) {
  drive.validate();
  const auto coeffs = build_coefficients(params);
  const auto t = drive_terms(params, coeffs, drive.omega0);
  const double c2 = coeffs.C * coeffs.C;
  return 0.5 * params.m * drive.D * drive.D *
         (t.a * t.a + t.b * t.b + 2.0 * t.e * t.e + 2.0 * c2) / t.z2;
}

MomentOfInertia moment_of_inertia(const RotorParams& params, const BathPair& baths,
                                  const DriveSpec& drive, const QuadratureConfig& quad_cfg) {
  check_inputs(params, baths);
  const auto coeffs = build_coefficients(params);
  const double hbar = uses_classical_kernels(params, baths) ? 0.0 : params.hbar;
  const double c2 = coeffs.C * coeffs.C;
  auto kernel = [&](double w) {
    const double mw2 = params.m * w * w;
    const double e2 = w * w * params.eta * params.eta;
    const double n1 = (coeffs.B - mw2) * (coeffs.B - mw2) + e2 + c2;
    const double n2 = (coeffs.A - mw2) * (coeffs.A - mw2) + e2 + c2;
    const double s1 = bath_psd(w, baths.T1, params.eta, hbar);
    const double s2 = bath_psd(w, baths.T2, params.eta, hbar);
    return (s1 * n1 + s2 * n2) / std::norm(response_denominator(w, params, coeffs));
  };
  MomentOfInertia out;
  out.I0 = params.m *
           integrate_even_kernel(kernel, cutoff_frequency(params, baths, quad_cfg), quad_cfg);
  out.I_drive = driven_moment_of_inertia(params, drive);
  return out;
}

double work_rate(const RotorParams& params, const DriveSpec& drive) {
  drive.validate();
  const auto coeffs = build_coefficients(params);
  const auto t = drive_terms(params, coeffs, drive.omega0);
  const double dw = drive.D * drive.omega0;
  const double c2 = coeffs.C * coeffs.C;
  return 0.5 * params.eta * dw * dw * (t.a * t.a + t.b * t.b + 2.0 * t.e * t.e + 2.0 * c2) /
         t.z2;
}

HeatRates heat_rates(const RotorParams& params, double L0, const DriveSpec& drive) {
  drive.validate();
  const auto coeffs = build_coefficients(params);
  const auto t = drive_terms(params, coeffs, drive.omega0);
  const double dw = drive.D * drive.omega0;
  const double drive_scale = 0.5 * params.eta * dw * dw / t.z2;
  const double intrinsic = coeffs.C / (2.0 * params.m) * L0;
  HeatRates out;
  out.r_q1 = -intrinsic - drive_scale * (t.b * t.b + (coeffs.C + t.e) * (coeffs.C + t.e));
  out.r_q2 = intrinsic - drive_scale * (t.a * t.a + (coeffs.C - t.e) * (coeffs.C - t.e));
  return out;
}

HeatRates heat_rates(const RotorParams& params, const BathPair& baths,
                     const DriveSpec& drive, const QuadratureConfig& quad_cfg) {
  return heat_rates(params, angular_momentum_quantum(params, baths, quad_cfg), drive);
}

double heat_transfer_difference(const RotorParams& params, double L0,
                                const DriveSpec& drive) {
  const auto rates = heat_rates(params, L0, drive);
  const double from_rates = rates.r_q1 - rates.r_q2;

  const auto coeffs = build_coefficients(params);
  const auto t = drive_terms(params, coeffs, drive.omega0);
  const double dw = drive.D * drive.omega0;
  const double intrinsic = -coeffs.C / params.m * L0;
  const double driven = 0.5 * params.eta * dw * dw *
                        (t.a * t.a - t.b * t.b - 4.0 * coeffs.C * params.eta * drive.omega0) /
                        t.z2;
  const double direct = intrinsic + driven;
  const double scale = std::abs(intrinsic) + std::abs(driven) + std::abs(rates.r_q1) +
                       std::abs(rates.r_q2);
  if (std::abs(from_rates - direct) > kIdentityTol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "heat-transfer identity violated: r_q1 - r_q2 = " << from_rates
        << " but direct evaluation gives " << direct;
    throw IdentityViolation(msg.str());
  }
  return from_rates;
}

double heat_transfer_difference(const RotorParams& params, const BathPair& baths,
                                const DriveSpec& drive, const QuadratureConfig& quad_cfg) {
  return heat_transfer_difference(params, angular_momentum_quantum(params, baths, quad_cfg),
                                  drive);
}

SteadyStateReport steady_state_report(const RotorParams& params, const BathPair& baths,
                                      const DriveSpec& drive,
                                      const QuadratureConfig& quad_cfg) {
  check_inputs(params, baths);
  drive.validate();
  SteadyStateReport r;
  r.L0 = angular_momentum_quantum(params, baths, quad_cfg);
  r.L0_classical = angular_momentum_classical(params, baths);
  r.M_xi = noise_torque_quantum(params, baths, quad_cfg);
  const auto inertia = moment_of_inertia(params, baths, drive, quad_cfg);
  r.I0 = inertia.I0;
  r.I_drive = inertia.I_drive;
  r.L_drive = driven_angular_momentum(params, r.L0, drive).L_drive;
  r.r_w = work_rate(params, drive);
  const auto rates = heat_rates(params, r.L0, drive);
  r.r_q1 = rates.r_q1;
  r.r_q2 = rates.r_q2;
  r.delta_rq = heat_transfer_difference(params, r.L0, drive);
  const double balance = r.r_q1 + r.r_q2 + r.r_w;
  const double scale = std::abs(r.r_q1) + std::abs(r.r_q2) + std::abs(r.r_w);
  if (std::abs(balance) > kIdentityTol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "energy balance violated: r_q1 + r_q2 + r_w = " << balance;
    throw IdentityViolation(msg.str());
  }
  return r;
}

}  // namespace rotor_lab
