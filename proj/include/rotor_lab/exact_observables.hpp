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

// Closed-form steady-state observables of the two-bath rotor. The intrinsic
// (undriven) quantities are frequency integrals; each can be evaluated by
// real-axis quadrature or, for <L>_0 and <M_xi>_0, by summing residues in the
// upper half plane. The driven parts are algebraic in the drive frequency.

#include <optional>
#include <utility>

#include "rotor_lab/core_model.hpp"
#include "rotor_lab/quadrature.hpp"

namespace rotor_lab {

struct ResidueConfig {
  /// Upper limit on the number of Matsubara terms per bath.
  int max_matsubara = 10000;
  /// Converged when doubling the explicit part moves the sum by less than this.
  double series_rel_tol = 1e-10;
  /// Minimum |4 m u - eta^2| (and minimum pole separation) treated as distinct.
  double degeneracy_guard = 1e-8;

  void validate() const;
};

enum class Method { Quadrature, Residues };

enum class SeriesObservable { L0, Mxi };

struct SteadyStateReport {
  double L0 = 0.0;
  double L0_classical = 0.0;
  double M_xi = 0.0;
  double I0 = 0.0;
  double L_drive = 0.0;
  double I_drive = 0.0;
  double r_w = 0.0;
  double r_q1 = 0.0;
  double r_q2 = 0.0;
  double delta_rq = 0.0;
};

/// <L>_0 = -4 m eta^2 C \int dw/2pi w^2 G(w) / |Z(w)|^2.
/// Classical kernels (hbar = 0 or a ClassicalWhite bath pair) replace G by
/// T1 - T2; the residue route needs quantum kernels and T1, T2 > 0.
double angular_momentum_quantum(const RotorParams& params, const BathPair& baths,
                                const QuadratureConfig& quad_cfg = {},
                                Method method = Method::Quadrature,
                                const ResidueConfig& residue_cfg = {});

/// High-temperature closed form
/// -2 m eta (T1 - T2)(u1 - u2) sin 2a / [m (u1 - u2)^2 + 2 eta^2 (u1 + u2)].
double angular_momentum_classical(const RotorParams& params, const BathPair& baths);

/// m -> 0 limit of (eta/m) <L>_0^cl: -(T1 - T2)(u1 - u2) sin 2a / (u1 + u2).
double overdamped_friction_torque(const RotorParams& params, const BathPair& baths);

/// <M_xi>_0 = 2 C eta \int dw/2pi G(w) / Z(w). The full complex kernel is
/// integrated; a non-negligible imaginary part raises IdentityViolation.
/// Exactly zero for classical kernels.
double noise_torque_quantum(const RotorParams& params, const BathPair& baths,
                            const QuadratureConfig& quad_cfg = {},
                            Method method = Method::Quadrature,
                            const ResidueConfig& residue_cfg = {});

/// Torque of the potential force, <x1 F2 - x2 F1>_0 with F = -grad U, from the
/// position covariances assembled out of the Green's functions. In steady
/// state it balances friction and noise: tau_U - (eta/m) <L>_0 + <M_xi>_0 = 0.
double potential_torque(const RotorParams& params, const BathPair& baths,
                        const QuadratureConfig& quad_cfg = {});

/// K(w0) = m [(A - m w0^2)(B - m w0^2) + (w0 eta)^2 - C^2] / |Z(w0)|^2.
double drive_response(double omega0, const RotorParams& params);

struct DrivenAngularMomentum {
  double L_total = 0.0;
  double L_drive = 0.0;
};

DrivenAngularMomentum driven_angular_momentum(const RotorParams& params,
                                              const BathPair& baths,
                                              const DriveSpec& drive,
                                              const QuadratureConfig& quad_cfg = {});

/// Same, reusing an already computed <L>_0.
DrivenAngularMomentum driven_angular_momentum(const RotorParams& params, double L0,
                                              const DriveSpec& drive);

/// Drive frequency at which <L>_0 + D^2 w0 K(w0) vanishes. The bracket
/// defaults to [-10, 10] sqrt(max(u1, u2)/m); it is scanned for the first sign
/// change, which is then bisected to 1e-12.
double arrest_frequency(const RotorParams& params, const BathPair& baths, double D,
                        std::optional<std::pair<double, double>> bracket = std::nullopt,
                        const QuadratureConfig& quad_cfg = {});

struct MomentOfInertia {
  double I0 = 0.0;
  double I_drive = 0.0;
};

MomentOfInertia moment_of_inertia(const RotorParams& params, const BathPair& baths,
                                  const DriveSpec& drive,
                                  const QuadratureConfig& quad_cfg = {});

/// Driven-part moment of inertia (m D^2 / 2)[...]/|Z(w0)|^2 on its own.
double driven_moment_of_inertia(const RotorParams& params, const DriveSpec& drive);

/// <r_w> = (eta (D w0)^2 / 2|Z|^2)[(A - m w0^2)^2 + (B - m w0^2)^2 + 2 (w0 eta)^2 + 2 C^2].
double work_rate(const RotorParams& params, const DriveSpec& drive);

struct HeatRates {
  double r_q1 = 0.0;
  double r_q2 = 0.0;
};

HeatRates heat_rates(const RotorParams& params, const BathPair& baths,
                     const DriveSpec& drive, const QuadratureConfig& quad_cfg = {});

HeatRates heat_rates(const RotorParams& params, double L0, const DriveSpec& drive);

/// <r_q1> - <r_q2>, checked against the direct closed form
/// -(C/m) <L>_0 + (eta/2)(D w0)^2 [(A - m w0^2)^2 - (B - m w0^2)^2 - 4 C eta w0]/|Z|^2.
/// Throws IdentityViolation when the two disagree beyond 1e-9 relative.
double heat_transfer_difference(const RotorParams& params, const BathPair& baths,
                                const DriveSpec& drive,
                                const QuadratureConfig& quad_cfg = {});

double heat_transfer_difference(const RotorParams& params, double L0,
                                const DriveSpec& drive);

/// Every observable at one parameter point. Throws IdentityViolation when
/// r_q1 + r_q2 + r_w departs from zero by more than 1e-9 relative.
SteadyStateReport steady_state_report(const RotorParams& params, const BathPair& baths,
                                      const DriveSpec& drive,
                                      const QuadratureConfig& quad_cfg = {});

struct ResidueSum {
  double value = 0.0;
  /// Imaginary remainder of the assembled residue sum (should be ~0).
  double imag = 0.0;
  /// Explicit Matsubara terms used per bath.
  int matsubara_terms = 0;
};

/// Contour closed in the upper half plane: residues at the oscillator poles
/// w = (i eta +- sqrt(4 m u - eta^2)) / 2m (for <L>_0 only) plus the
/// Matsubara poles w = 2 pi i p T_n / hbar. The Matsubara series is summed
/// explicitly and its remainder integrated; the number of explicit terms is
/// doubled until the total moves by less than series_rel_tol.
///
/// A critically damped pair (|4 m u - eta^2| < degeneracy_guard) is a double
/// pole; its combined residue is taken with a Cauchy integral on a circle that
/// encloses both roots and no other singularity.
ResidueSum residue_series_sum(SeriesObservable observable, const RotorParams& params,
                              const BathPair& baths, const ResidueConfig& cfg = {});

}  // namespace rotor_lab
