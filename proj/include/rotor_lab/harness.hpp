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

// Batch commands behind the rotor_lab executable. Each produces CSV tables
// whose first line is a "# rotor_lab ..." comment, then a header row.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotor_lab/config.hpp"

namespace rotor_lab {

struct Table {
  std::string comment;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws Error if absent
  double number(std::size_t row, const std::string& name) const;
};

/// 17 significant digits; NaN prints as "nan".
std::string format_number(double v);

void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);
std::string table_to_string(const Table& table);

struct HarnessOptions {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool deterministic = false;
};

/// Exit codes of the executable.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

/// Per-point master seed: a SplitMix64 scramble of (seed, point index), so
/// neighbouring grid points use unrelated noise.
std::uint64_t point_seed(std::uint64_t master_seed, std::uint64_t index);

/// Columns: axis, L0, L0_classical, M_xi, I0, r_w, r_q1, r_q2, delta_rq,
/// L_drive, I_drive.
Table exact_table(const RunConfig& cfg, const HarnessOptions& opts);

/// Columns: axis, n_traj, then <obs>_mean and <obs>_se for L, M_xi, I, r2,
/// r_q1, r_q2, r_w; with rigid_body also L_over_r2, ratio_of_means and
/// rigid_diff. Standard errors are nan for a single trajectory.
Table simulate_table(const RunConfig& cfg, const HarnessOptions& opts);

struct ValidationOutcome {
  Table table;  // axis, observable, exact, sim_mean, sim_se, z, pass
  std::size_t failed = 0;
  std::size_t total = 0;
  int exit_code = kExitOk;
};

/// Compares simulated means with the exact columns (L against L0 + L_drive,
/// I against I0 + I_drive, the rest by name). Throws GridMismatch when the
/// axis columns differ. Exit code 1 when more than 5% of rows have |z| > 3.
ValidationOutcome validate_tables(const Table& exact, const Table& sim,
                                  const std::vector<std::string>& observables);

enum class Figure { Fig1Top, Fig1Bottom, Fig2, FigB1 };
Figure figure_from_string(const std::string& name);

/// Writes the figure's CSV files into out_dir and returns their paths.
std::vector<std::filesystem::path> write_figure(Figure which, const RunConfig& cfg,
                                                const HarnessOptions& opts,
                                                const std::filesystem::path& out_dir);

}  // namespace rotor_lab
