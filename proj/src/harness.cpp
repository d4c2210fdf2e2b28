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
#include "rotor_lab/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <sstream>

#include "rotor_lab/errors.hpp"
#include "rotor_lab/exact_observables.hpp"

namespace rotor_lab {

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string header(const std::string& command, const std::string& axis, const std::string& extra,
                   const HarnessOptions& opts) {
  std::string h = "rotor_lab " + command + " axis=" + axis;
  if (!extra.empty()) h += " " + extra;
  if (!opts.deterministic) h += " generated=" + timestamp();
  return h;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string describe_point(SweepAxis axis, double v) {
  return std::string(to_string(axis)) + "=" + format_number(v);
}

// Rethrows a failure at one grid point with the point named, keeping the
// error class that decides the exit code.
[[noreturn]] void rethrow_at(std::exception_ptr error, SweepAxis axis, double v) {
  const std::string where = "at " + describe_point(axis, v) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  } catch (const StabilityViolation& e) {
    throw StabilityViolation(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
  std::terminate();
}

SimConfig sim_settings(const RunConfig& cfg, const HarnessOptions& opts) {
  if (!cfg.sim) throw ConfigError("this command needs a [sim] section");
  SimConfig sim = *cfg.sim;
  if (opts.seed) sim.master_seed = *opts.seed;
  if (opts.threads > 0) sim.threads = opts.threads;
  sim.validate();
  return sim;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

const std::vector<std::string> kSimObservables = {"L",    "M_xi", "I",  "r2",
                                                  "r_q1", "r_q2", "r_w"};

std::string se_text(const ObservableEstimate& e) {
  return format_number(e.std_error ? *e.std_error : std::nan(""));
}

RunConfig with_sweep(const RunConfig& cfg, SweepAxis axis, std::vector<double> grid) {
  RunConfig out = cfg;
  out.sweep.axis = axis;
  out.sweep.grid = std::move(grid);
  return out;
}

std::filesystem::path emit(const std::filesystem::path& dir, const std::string& name,
                           const Table& table) {
  const auto path = dir / name;
  write_table(path, table);
  return path;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw Error("table has no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw Error("column '" + name + "' row " + std::to_string(row) + ": not a number: " + cell);
  }
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string table_to_string(const Table& table) {
  std::string out;
  if (!table.comment.empty()) out += "# " + table.comment + "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
  return out;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << table_to_string(table);
  if (!out) throw Error("failed writing " + path.string());
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Table table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (table.comment.empty()) table.comment = line.substr(line.size() > 1 ? 2 : 1);
      continue;
    }
    auto cells = split_csv(line);
    if (!have_header) {
      table.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.columns.size()) {
        throw ConfigError(path.string() + ": row has " + std::to_string(cells.size()) +
                          " cells, header has " + std::to_string(table.columns.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw ConfigError(path.string() + ": no header row");
  return table;
}

std::uint64_t point_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Table exact_table(const RunConfig& cfg, const HarnessOptions& opts) {
  validate_sweep(cfg.sweep);
  const auto& grid = cfg.sweep.grid;
  const int n = static_cast<int>(grid.size());
  std::vector<SteadyStateReport> reports(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());

  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      const auto p = cfg.at(grid[i]);
      p.rotor.validate();
      p.baths.validate(p.rotor);
      p.drive.validate();
      reports[i] = steady_state_report(p.rotor, p.baths, p.drive);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (errors[i]) rethrow_at(errors[i], cfg.sweep.axis, grid[i]);
  }

  const std::string axis(to_string(cfg.sweep.axis));
  Table t;
  t.comment = header("exact", axis, "", opts);
  t.columns = {axis, "L0",   "L0_classical", "M_xi",    "I0",    "r_w",
               "r_q1", "r_q2", "delta_rq",   "L_drive", "I_drive"};
  for (int i = 0; i < n; ++i) {
    const auto& r = reports[i];
    t.rows.push_back({format_number(grid[i]), format_number(r.L0), format_number(r.L0_classical),
                      format_number(r.M_xi), format_number(r.I0), format_number(r.r_w),
                      format_number(r.r_q1), format_number(r.r_q2), format_number(r.delta_rq),
                      format_number(r.L_drive), format_number(r.I_drive)});
  }
  return t;
}

Table simulate_table(const RunConfig& cfg, const HarnessOptions& opts) {
  validate_sweep(cfg.sweep);
  const SimConfig base_sim = sim_settings(cfg, opts);
  const std::string axis(to_string(cfg.sweep.axis));

  Table t;
  std::ostringstream extra;
  extra << "model=" << to_string(cfg.model) << " seed=" << base_sim.master_seed
        << " n_traj=" << base_sim.n_traj << " n_steps=" << base_sim.n_steps
        << " dt=" << format_number(base_sim.dt);
  t.comment = header("simulate", axis, extra.str(), opts);
  t.columns = {axis, "n_traj"};
  for (const auto& name : kSimObservables) {
    t.columns.push_back(name + "_mean");
    t.columns.push_back(name + "_se");
  }
  if (base_sim.rigid_body) {
    for (const char* name : {"L_over_r2", "ratio_of_means", "rigid_diff"}) {
      t.columns.push_back(std::string(name) + "_mean");
      t.columns.push_back(std::string(name) + "_se");
    }
  }

  const auto& grid = cfg.sweep.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SimConfig sim = base_sim;
    sim.master_seed = point_seed(base_sim.master_seed, i);
    EnsembleResult ens;
    try {
      const auto p = cfg.at(grid[i]);
      p.rotor.validate();
      p.baths.validate(p.rotor);
      p.drive.validate();
      ens = run_ensemble(p.rotor, p.baths, p.drive, sim);
    } catch (...) {
      rethrow_at(std::current_exception(), cfg.sweep.axis, grid[i]);
    }
    std::vector<std::string> row = {format_number(grid[i]), std::to_string(sim.n_traj)};
    for (const auto& name : kSimObservables) {
      const auto& e = ens.estimates.at(name);
      row.push_back(format_number(e.mean));
      row.push_back(se_text(e));
    }
    if (sim.rigid_body) {
      const auto rb = rigid_body_from_ensemble(ens);
      for (const auto* e : {&rb.mean_of_ratio, &rb.ratio_of_means, &rb.difference}) {
        row.push_back(format_number(e->mean));
        row.push_back(se_text(*e));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

ValidationOutcome validate_tables(const Table& exact, const Table& sim,
                                  const std::vector<std::string>& observables) {
  if (exact.columns.empty() || sim.columns.empty()) throw ConfigError("empty table");
  if (exact.columns[0] != sim.columns[0]) {
    throw GridMismatch("axis differs: exact table has '" + exact.columns[0] +
                       "', simulation table has '" + sim.columns[0] + "'");
  }
  if (exact.rows.size() != sim.rows.size()) {
    throw GridMismatch("grid sizes differ: " + std::to_string(exact.rows.size()) + " vs " +
                       std::to_string(sim.rows.size()));
  }
  const std::string& axis = exact.columns[0];
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    const double a = exact.number(i, axis);
    const double b = sim.number(i, axis);
    if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) {
      throw GridMismatch("grid point " + std::to_string(i) + " differs: " + format_number(a) +
                         " vs " + format_number(b));
    }
  }

  auto exact_value = [&exact](std::size_t row, const std::string& name) {
    if (name == "L") return exact.number(row, "L0") + exact.number(row, "L_drive");
    if (name == "I") return exact.number(row, "I0") + exact.number(row, "I_drive");
    if (name == "M_xi" || name == "r_w" || name == "r_q1" || name == "r_q2") {
      return exact.number(row, name);
    }
    throw ConfigError("no exact counterpart for observable '" + name + "'");
  };

  ValidationOutcome out;
  out.table.comment = "rotor_lab validate axis=" + axis;
  out.table.columns = {axis, "observable", "exact", "sim_mean", "sim_se", "z", "pass"};
  for (const auto& name : observables) {
    for (std::size_t i = 0; i < exact.rows.size(); ++i) {
      const double ex = exact_value(i, name);
      const double mean = sim.number(i, name + "_mean");
      const double se = sim.number(i, name + "_se");
      // A zero error bar only passes an exact match (e.g. r_w without drive).
      const double z = se > 0.0 ? (mean - ex) / se
                       : mean == ex ? 0.0
                                    : std::copysign(HUGE_VAL, mean - ex);
      const bool pass = std::abs(z) <= 3.0;
      ++out.total;
      if (!pass) ++out.failed;
      out.table.rows.push_back({exact.rows[i][0], name, format_number(ex), format_number(mean),
                                format_number(se), format_number(z), pass ? "1" : "0"});
    }
  }
  out.exit_code = (20 * out.failed > out.total) ? kExitValidationFailed : kExitOk;
  return out;
}

Figure figure_from_string(const std::string& name) {
  if (name == "fig1_top") return Figure::Fig1Top;
  if (name == "fig1_bottom") return Figure::Fig1Bottom;
  if (name == "fig2") return Figure::Fig2;
  if (name == "figB1") return Figure::FigB1;
  throw ConfigError("unknown figure '" + name + "' (fig1_top, fig1_bottom, fig2, figB1)");
}

std::vector<std::filesystem::path> write_figure(Figure which, const RunConfig& cfg,
                                                const HarnessOptions& opts,
                                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> files;
  auto select = [](const Table& full, const std::vector<std::string>& keep) {
    Table t;
    t.comment = full.comment;
    std::vector<std::size_t> idx;
    for (const auto& k : keep) idx.push_back(full.column(k));
    for (std::size_t i : idx) t.columns.push_back(full.columns[i]);
    for (const auto& row : full.rows) {
      std::vector<std::string> r;
      for (std::size_t i : idx) r.push_back(row[i]);
      t.rows.push_back(std::move(r));
    }
    return t;
  };
  auto sim_points = [&](const std::string& name) {
    if (cfg.sim) files.push_back(emit(out_dir, name, simulate_table(cfg, opts)));
  };

  switch (which) {
    case Figure::Fig1Top: {
      const auto dense = exact_table(with_sweep(cfg, SweepAxis::Theta, geomspace(0.01, 100.0, 121)),
                                     opts);
      files.push_back(emit(out_dir, "fig1_top.csv", select(dense, {"theta", "L0", "L0_classical"})));
      files.push_back(emit(out_dir, "fig1_top_inset.csv", select(dense, {"theta", "M_xi"})));
      sim_points("fig1_top_sim.csv");
      break;
    }
    case Figure::Fig1Bottom: {
      const auto alphas = linspace(0.0, kPi, 181);
      const auto dense = exact_table(with_sweep(cfg, SweepAxis::Alpha, alphas), opts);
      files.push_back(
          emit(out_dir, "fig1_bottom.csv", select(dense, {"alpha", "L0", "L0_classical"})));
      // Inset: M_xi against alpha at two temperature scales.
      Table inset;
      inset.comment = header("figures", "alpha", "inset=M_xi theta=0.1,1", opts);
      inset.columns = {"alpha", "M_xi_theta_0.1", "M_xi_theta_1"};
      std::vector<Table> parts;
      for (double theta : {0.1, 1.0}) {
        RunConfig c = with_sweep(cfg, SweepAxis::Alpha, alphas);
        c.theta = theta;
        parts.push_back(exact_table(c, opts));
      }
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        inset.rows.push_back({format_number(alphas[i]),
                              parts[0].rows[i][parts[0].column("M_xi")],
                              parts[1].rows[i][parts[1].column("M_xi")]});
      }
      files.push_back(emit(out_dir, "fig1_bottom_inset.csv", inset));
      sim_points("fig1_bottom_sim.csv");
      break;
    }
    case Figure::Fig2: {
      const auto dense = exact_table(with_sweep(cfg, SweepAxis::Omega0, linspace(-3.0, 3.0, 241)),
                                     opts);
      files.push_back(emit(out_dir, "fig2.csv", select(dense, {"omega0", "r_w", "r_q1", "r_q2"})));
      sim_points("fig2_sim.csv");
      break;
    }
    case Figure::FigB1: {
      if (!cfg.sim) throw ConfigError("figB1 needs a [sim] section");
      RunConfig c = cfg;
      c.model = NoiseModel::ClassicalWhite;
      c.sim->rigid_body = true;
      const std::vector<std::string> keep = {"L_over_r2_mean",      "L_over_r2_se",
                                             "ratio_of_means_mean", "ratio_of_means_se",
                                             "rigid_diff_mean",     "rigid_diff_se"};
      auto panel = [&](SweepAxis axis, std::vector<double> grid, const std::string& name) {
        const auto full = simulate_table(with_sweep(c, axis, std::move(grid)), opts);
        std::vector<std::string> cols = {std::string(to_string(axis))};
        cols.insert(cols.end(), keep.begin(), keep.end());
        files.push_back(emit(out_dir, name, select(full, cols)));
      };
      panel(SweepAxis::Alpha, linspace(0.0, kPi, 9), "figB1_alpha.csv");
      panel(SweepAxis::T2, linspace(1.0, 8.0, 8), "figB1_T2.csv");
      break;
    }
  }
  return files;
}

}  // namespace rotor_lab
