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
#include "rotor_lab/core_model.hpp"

#include <cmath>
#include <string>

#include "rotor_lab/errors.hpp"

namespace rotor_lab {

namespace {

// Below this value of hbar|w|/T the Bernoulli series replaces the division.
constexpr double kSeriesThreshold = 2e-4;

// y / (e^y - 1) for small y.
double bernoulli_series(double y) {
  const double y2 = y * y;
  return 1.0 - 0.5 * y + y2 / 12.0 - y2 * y2 / 720.0;
}

// e^z - 1 without cancellation for small |z|.
Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

// y / (e^y - 1) - 1 + y / 2, an even function starting at y^2 / 12.
double excess_shift(double y) {
  if (y < 0.2) {
    const double y2 = y * y;
    return y2 * (1.0 / 12.0 +
                 y2 * (-1.0 / 720.0 +
                       y2 * (1.0 / 30240.0 + y2 * (-1.0 / 1209600.0 + y2 / 47900160.0))));
  }
  return y / std::expm1(y) - 1.0 + 0.5 * y;
}

}  // namespace

void RotorParams::validate() const {
  if (!(u1 > 0.0) || !(u2 > 0.0)) {
    throw StabilityViolation("anisotropies must satisfy u1 > 0 and u2 > 0 (got u1=" +
                             std::to_string(u1) + ", u2=" + std::to_string(u2) + ")");
  }
  if (!(m > 0.0)) throw StabilityViolation("mass must be positive");
  if (!(eta > 0.0)) throw StabilityViolation("friction eta must be positive");
  if (!(hbar >= 0.0)) throw StabilityViolation("hbar must be nonnegative");
  if (!std::isfinite(alpha)) throw StabilityViolation("rotation angle must be finite");
}

std::string_view to_string(NoiseModel model) {
  return model == NoiseModel::QuantumColored ? "quantum" : "classical";
}

NoiseModel noise_model_from_string(std::string_view text) {
  if (text == "quantum" || text == "QuantumColored") return NoiseModel::QuantumColored;
  if (text == "classical" || text == "ClassicalWhite") return NoiseModel::ClassicalWhite;
  throw Error("unknown noise model '" + std::string(text) + "' (expected quantum|classical)");
}

void BathPair::validate(const RotorParams& /*params*/) const {
  if (!(T1 >= 0.0) || !(T2 >= 0.0)) {
    throw StabilityViolation("bath temperatures must be nonnegative");
  }
}

void DriveSpec::validate() const {
  if (!(D >= 0.0)) throw StabilityViolation("drive amplitude must be nonnegative");
  if (!std::isfinite(omega0)) throw StabilityViolation("drive frequency must be finite");
}

bool uses_classical_kernels(const RotorParams& params, const BathPair& baths) {
  return baths.model == NoiseModel::ClassicalWhite || params.hbar == 0.0;
}

PotentialCoefficients build_coefficients(const RotorParams& params) {
  params.validate();
  const double c = std::cos(params.alpha);
  const double s = std::sin(params.alpha);
  PotentialCoefficients out;
  out.A = params.u1 * c * c + params.u2 * s * s;
  out.B = params.u2 * c * c + params.u1 * s * s;
  out.C = 0.5 * (params.u1 - params.u2) * std::sin(2.0 * params.alpha);
  return out;
}

Complex response_denominator(Complex omega, const RotorParams& params,
                             const PotentialCoefficients& coeffs) {
  const Complex i{0.0, 1.0};
  const Complex q = params.m * omega * omega + i * omega * params.eta;
  return (coeffs.A - q) * (coeffs.B - q) - coeffs.C * coeffs.C;
}

Complex response_denominator_derivative(Complex omega, const RotorParams& params,
                                        const PotentialCoefficients& coeffs) {
  const Complex i{0.0, 1.0};
  const Complex q = params.m * omega * omega + i * omega * params.eta;
  const Complex dq = 2.0 * params.m * omega + i * params.eta;
  return -dq * (coeffs.A + coeffs.B - 2.0 * q);
}

GreensFunctions greens_functions(double omega, const RotorParams& params,
                                 const PotentialCoefficients& coeffs) {
  const Complex damp{-params.m * omega * omega, -omega * params.eta};
  const Complex z = response_denominator(omega, params, coeffs);
  GreensFunctions g;
  g.K1 = (coeffs.B + damp) / z;
  g.K2 = -coeffs.C / z;
  g.L1 = g.K2;
  g.L2 = (coeffs.A + damp) / z;
  return g;
}

double thermal_excess(double omega, double T, double hbar) {
  if (hbar == 0.0) return T;
  if (T == 0.0) return 0.0;
  const double hw = hbar * std::abs(omega);
  const double y = hw / T;
  if (y < kSeriesThreshold) return T * bernoulli_series(y);
  return hw / std::expm1(y);
}

Complex thermal_excess(Complex omega, double T, double hbar) {
  if (hbar == 0.0) return T;
  if (T == 0.0) return 0.0;
  const Complex hw = hbar * omega;
  const Complex y = hw / T;
  if (std::abs(y) < kSeriesThreshold) {
    const Complex y2 = y * y;
    return T * (1.0 - 0.5 * y + y2 / 12.0 - y2 * y2 / 720.0);
  }
  return hw / expm1(y);
}

double thermal_kernel(double omega, double T1, double T2, double hbar) {
  if (T1 == T2) return 0.0;
  return thermal_excess(omega, T1, hbar) - thermal_excess(omega, T2, hbar);
}

double thermal_kernel_shifted(double omega, double T1, double T2, double hbar) {
  if (T1 == T2 || hbar == 0.0) return 0.0;
  const double hw = hbar * std::abs(omega);
  // excess(T) - T = part(T) - hw/2; the hw/2 cancels between the baths.
  auto part = [hw](double T) { return T > 0.0 ? T * excess_shift(hw / T) : 0.5 * hw; };
  return part(T1) - part(T2);
}

Complex thermal_kernel(Complex omega, double T1, double T2, double hbar) {
  if (T1 == T2) return 0.0;
  if (omega.real() < 0.0) omega = -omega;
  return thermal_excess(omega, T1, hbar) - thermal_excess(omega, T2, hbar);
}

double bath_psd(double omega, double T, double eta, double hbar) {
  return eta * (hbar * std::abs(omega) + 2.0 * thermal_excess(omega, T, hbar));
}

}  // namespace rotor_lab
