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

// Test-side reference computations. None of these call the library's
// observable code; they share only the parameter structs.

#include <array>
#include <complex>
#include <functional>

#include "rotor_lab/core_model.hpp"

namespace oracle {

using Mat4 = std::array<std::array<double, 4>, 4>;

/// Stiffness matrix R diag(u1, u2) R^T built from the rotation angle.
std::array<double, 3> stiffness(const rotor_lab::RotorParams& p);  // {A, B, C}

/// Stationary covariance of (x1, x2, v1, v2) for white noise of strength
/// 2 eta T_n, from the Lyapunov equation J S + S J^T + Q = 0.
Mat4 classical_covariance(const rotor_lab::RotorParams& p, double T1, double T2);

struct ClassicalMoments {
  double L;    // m <x1 v2 - x2 v1>
  double I;    // m <x1^2 + x2^2>
  double vv1;  // <v1^2>
  double vv2;  // <v2^2>
};
ClassicalMoments classical_moments(const rotor_lab::RotorParams& p, double T1, double T2);

/// Periodic orbit under f = D (cos w0 t, sin w0 t) from a direct 2x2 complex
/// solve, with time averages over one period.
struct DrivenOrbit {
  double L;    // m <x1 v2 - x2 v1>
  double I;    // m <|x|^2>
  double r_w;  // -<x . df/dt>
  double r_q1;  // -eta <v1^2>, the friction power on coordinate 1
  double r_q2;
};
DrivenOrbit driven_orbit(const rotor_lab::RotorParams& p, double D, double omega0);

/// Composite Simpson on w = tan(t), t in [0, pi/2), of an even integrand;
/// returns \int dw/2pi over the real line.
double brute_force_line_integral(const std::function<double(double)>& f, int panels = 200000);

}  // namespace oracle
