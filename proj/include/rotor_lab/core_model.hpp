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

// Physical parameters of the two-bath harmonic rotor and the frequency-domain
// objects every other module is built from: the potential coefficients, the
// response denominator Z(w), the Green's-function transfer functions and the
// Ohmic bath spectra.
//
// Conventions: k_B = 1, x(t) = \int dw/2pi e^{-iwt} x(w). With this sign the
// retarded response has its poles in the lower half plane.

#include <complex>
#include <numbers>
#include <string_view>

namespace rotor_lab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

struct RotorParams {
  double m = 1.0;
  double eta = 1.0;
  /// 0 selects the classical limit everywhere.
  double hbar = 1.0;
  double u1 = 1.0;
  double u2 = 0.25;
  double alpha = kPi / 4.0;

  /// Throws StabilityViolation unless u1, u2, m, eta > 0 and hbar >= 0.
  void validate() const;

  friend bool operator==(const RotorParams&, const RotorParams&) = default;
};

/// U(x1, x2) = A x1^2 / 2 + B x2^2 / 2 + C x1 x2.
struct PotentialCoefficients {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

enum class NoiseModel { QuantumColored, ClassicalWhite };

std::string_view to_string(NoiseModel model);
/// Accepts "quantum" / "classical" (and the enum spellings).
NoiseModel noise_model_from_string(std::string_view text);

struct BathPair {
  double T1 = 2.0;
  double T2 = 5.0;
  NoiseModel model = NoiseModel::QuantumColored;

  void validate(const RotorParams& params) const;

  friend bool operator==(const BathPair&, const BathPair&) = default;
};

/// Circular drive f(t) = D (cos w0 t, sin w0 t).
struct DriveSpec {
  double D = 0.0;
  double omega0 = 0.0;

  void validate() const;

  friend bool operator==(const DriveSpec&, const DriveSpec&) = default;
};

/// True when every kernel should take its classical (hbar -> 0) form.
bool uses_classical_kernels(const RotorParams& params, const BathPair& baths);

PotentialCoefficients build_coefficients(const RotorParams& params);

/// Z(w) = (A - m w^2 - i w eta)(B - m w^2 - i w eta) - C^2. Accepts complex w
/// because the residue evaluation continues it off the real axis.
Complex response_denominator(Complex omega, const RotorParams& params,
                             const PotentialCoefficients& coeffs);

/// dZ/dw.
Complex response_denominator_derivative(Complex omega, const RotorParams& params,
                                        const PotentialCoefficients& coeffs);

/// Fourier-space Green's functions: x1 = K1 xi1 + K2 xi2, x2 = L1 xi1 + L2 xi2.
struct GreensFunctions {
  Complex K1;
  Complex K2;
  Complex L1;
  Complex L2;
};

GreensFunctions greens_functions(double omega, const RotorParams& params,
                                 const PotentialCoefficients& coeffs);

/// The thermal excess hbar w / (exp(hbar w / T) - 1), taken at |w|. This is
/// (hbar w / 2) coth(hbar w / 2T) - hbar |w| / 2; it tends to T at w = 0 and
/// to T when hbar = 0.
double thermal_excess(double omega, double T, double hbar);

/// Complex continuation of the same quantity (no absolute value; w != 0).
Complex thermal_excess(Complex omega, double T, double hbar);

/// G(w, T1, T2) = (hbar w / 2)[coth(hbar w / 2T1) - coth(hbar w / 2T2)].
/// Even in w; equals T1 - T2 at w = 0 and for hbar = 0.
double thermal_kernel(double omega, double T1, double T2, double hbar);

/// G(w) - G(0), computed without subtracting the two O(T) pieces.
double thermal_kernel_shifted(double omega, double T1, double T2, double hbar);

/// Complex continuation of G, used at off-axis poles. Evaluated on the
/// representative with Re(w) >= 0 (G is even) to avoid cancellation.
Complex thermal_kernel(Complex omega, double T1, double T2, double hbar);

/// Symmetrized Ohmic noise spectrum S(w) = eta hbar w coth(hbar w / 2T).
/// Even and nonnegative; S(0) = 2 eta T; hbar = 0 gives 2 eta T.
double bath_psd(double omega, double T, double eta, double hbar);

}  // namespace rotor_lab
