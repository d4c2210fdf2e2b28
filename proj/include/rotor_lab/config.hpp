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

// Run configuration: a flat "key = value" format with sections
//
//   [rotor]  m eta hbar u1 u2 alpha
//   [baths]  model (quantum|classical) tau1 tau2 theta      T_n = tau_n * theta
//   [drive]  D omega0
//   [sweep]  axis (theta|alpha|omega0|T2) grid
//   [sim]    dt n_steps n_traj burn_in_fraction seed x1 x2 v1 v2 rigid_body
//
// Numbers may be written as small expressions: 0.25, 3*pi/4, 2^18, -pi/2.
// A grid is a comma-separated list, linspace(a, b, n) or geomspace(a, b, n).
// '#' starts a comment. Unknown sections or keys are errors. [sim] is
// optional; everything else has defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotor_lab/core_model.hpp"
#include "rotor_lab/langevin.hpp"

namespace rotor_lab {

enum class SweepAxis { Theta, Alpha, Omega0, T2 };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Theta;
  std::vector<double> grid;
};

struct RunConfig {
  RotorParams rotor;
  NoiseModel model = NoiseModel::QuantumColored;
  double tau1 = 2.0;
  double tau2 = 5.0;
  double theta = 1.0;
  DriveSpec drive;
  SweepSpec sweep;
  std::optional<SimConfig> sim;

  /// Parameters at one sweep value.
  struct Point {
    RotorParams rotor;
    BathPair baths;
    DriveSpec drive;
  };
  Point at(double axis_value) const;
  /// Parameters with no sweep value applied.
  Point base() const;
};

/// Evaluates a numeric expression (numbers, pi, + - * / ^, parentheses).
double evaluate_expression(std::string_view text);

RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text: fixed section and key order, %.17g numbers, explicit grid.
std::string serialize_config(const RunConfig& cfg);

/// Grid must be nonempty and strictly increasing.
void validate_sweep(const SweepSpec& sweep);

}  // namespace rotor_lab
