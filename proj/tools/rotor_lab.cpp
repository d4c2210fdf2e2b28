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
// rotor_lab: exact sweeps, simulation campaigns, validation and figure data.
//
//   rotor_lab exact     --config FILE [--out DIR]
//   rotor_lab simulate  --config FILE [--out DIR] [--seed U64] [--threads N]
//   rotor_lab validate  --exact CSV --sim CSV [--observables L,M_xi] [--out DIR]
//   rotor_lab figures   --which NAME --config FILE [--out DIR]
//
// Exit status: 0 ok, 1 validation failed, 2 config or grid error, 3 numerical error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rotor_lab/config.hpp"
#include "rotor_lab/errors.hpp"
#include "rotor_lab/harness.hpp"

namespace fs = std::filesystem;
using namespace rotor_lab;

namespace {

struct Args {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool deterministic = false;
  std::string exact_csv;
  std::string sim_csv;
  std::vector<std::string> observables = {"L", "M_xi"};
  std::string which;
};

int threads_from_env() {
  const char* env = std::getenv("ROTOR_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const int n = std::stoi(env);
    if (n < 0) throw ConfigError("ROTOR_LAB_THREADS must be nonnegative");
    return n;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string("ROTOR_LAB_THREADS is not an integer: ") + env);
  }
}

HarnessOptions options(const Args& a) {
  HarnessOptions o;
  o.seed = a.seed;
  o.threads = a.threads > 0 ? a.threads : threads_from_env();
  o.deterministic = a.deterministic;
  return o;
}

void report(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

fs::path output_dir(const Args& a) {
  fs::path dir(a.out);
  fs::create_directories(dir);
  return dir;
}

int run_exact(const Args& a) {
  const auto cfg = load_config(a.config);
  const auto path = output_dir(a) / "exact.csv";
  write_table(path, exact_table(cfg, options(a)));
  report(path);
  return kExitOk;
}

int run_simulate(const Args& a) {
  const auto cfg = load_config(a.config);
  const auto path = output_dir(a) / "sim.csv";
  write_table(path, simulate_table(cfg, options(a)));
  report(path);
  return kExitOk;
}

int run_validate(const Args& a) {
  const auto out = validate_tables(read_table(a.exact_csv), read_table(a.sim_csv), a.observables);
  const auto path = output_dir(a) / "validation.csv";
  write_table(path, out.table);
  report(path);
  std::cout << out.failed << " of " << out.total << " rows outside 3 sigma\n";
  return out.exit_code;
}

int run_figures(const Args& a) {
  const auto cfg = load_config(a.config);
  for (const auto& p : write_figure(figure_from_string(a.which), cfg, options(a), output_dir(a))) {
    report(p);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-temperature rotor: exact observables and Langevin simulation"};
  app.require_subcommand(1);
  Args args;

  auto common = [&args](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", args.config, "configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    sub->add_option("--seed", args.seed, "master seed (overrides [sim] seed)");
    sub->add_option("--threads", args.threads, "worker threads (default: ROTOR_LAB_THREADS)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--deterministic", args.deterministic, "omit the timestamp from CSV headers");
  };

  auto* exact = app.add_subcommand("exact", "exact observables over the sweep grid");
  common(exact, true);
  auto* simulate = app.add_subcommand("simulate", "ensemble estimates over the sweep grid");
  common(simulate, true);
  auto* validate = app.add_subcommand("validate", "z-scores of simulation against exact values");
  common(validate, false);
  validate->add_option("--exact", args.exact_csv, "exact.csv")->required();
  validate->add_option("--sim", args.sim_csv, "sim.csv")->required();
  validate->add_option("--observables", args.observables, "observables to compare")
      ->delimiter(',')
      ->capture_default_str();
  auto* figures = app.add_subcommand("figures", "figure-ready CSV files");
  common(figures, true);
  figures->add_option("--which", args.which, "fig1_top, fig1_bottom, fig2 or figB1")
      ->required()
      ->check(CLI::IsMember({"fig1_top", "fig1_bottom", "fig2", "figB1"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*exact) return run_exact(args);
    if (*simulate) return run_simulate(args);
    if (*validate) return run_validate(args);
    return run_figures(args);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const GridMismatch& e) {
    std::cerr << "grid mismatch: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
