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
#include "rotor_lab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rotor_lab/errors.hpp"

namespace rotor_lab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("bad number '" + std::string(text_) + "': " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    const double base = primary();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return kPi;
    }
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::vector<double> parse_grid(std::string_view value) {
  for (const std::string_view fn : {"linspace", "geomspace"}) {
    if (value.substr(0, fn.size()) != fn) continue;
    auto rest = trim(value.substr(fn.size()));
    if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
      throw ConfigError(std::string(fn) + " needs (start, stop, count)");
    }
    const auto args = split_top_level(rest.substr(1, rest.size() - 2));
    if (args.size() != 3) throw ConfigError(std::string(fn) + " needs three arguments");
    const double a = evaluate_expression(args[0]);
    const double b = evaluate_expression(args[1]);
    const double nd = evaluate_expression(args[2]);
    if (nd < 1 || nd != std::floor(nd) || nd > 1e7) {
      throw ConfigError(std::string(fn) + " count must be a positive integer");
    }
    const auto n = static_cast<int>(nd);
    const bool geometric = fn == "geomspace";
    if (geometric && !(a > 0.0 && b > 0.0)) {
      throw ConfigError("geomspace endpoints must be positive");
    }
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) {
      const double f = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      grid[k] = geometric ? a * std::pow(b / a, f) : a + (b - a) * f;
    }
    if (n > 1) grid.back() = b;
    return grid;
  }
  std::vector<double> grid;
  for (auto part : split_top_level(value)) {
    if (part.empty()) continue;
    grid.push_back(evaluate_expression(part));
  }
  return grid;
}

// Plain integers are read exactly (seeds use all 64 bits); anything else goes
// through the expression evaluator, e.g. 2^18.
std::uint64_t as_count(std::string_view text, const std::string& key) {
  std::uint64_t n = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
  if (res.ec == std::errc{} && res.ptr == text.data() + text.size()) return n;
  const double v = evaluate_expression(text);
  if (!(v >= 0.0) || v != std::floor(v) || v >= 9.0e15) {
    throw ConfigError(key + " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

bool as_bool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + " must be true or false");
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Theta: return "theta";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Omega0: return "omega0";
    case SweepAxis::T2: return "T2";
  }
  return "theta";
}

SweepAxis sweep_axis_from_string(std::string_view text) {
  if (text == "theta") return SweepAxis::Theta;
  if (text == "alpha") return SweepAxis::Alpha;
  if (text == "omega0") return SweepAxis::Omega0;
  if (text == "T2") return SweepAxis::T2;
  throw ConfigError("unknown sweep axis '" + std::string(text) +
                    "' (expected theta|alpha|omega0|T2)");
}

double evaluate_expression(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty value");
  const double v = ExpressionParser(text).parse();
  if (!std::isfinite(v)) throw ConfigError("'" + std::string(text) + "' is not a finite number");
  return v;
}

RunConfig::Point RunConfig::base() const {
  Point p{rotor, BathPair{tau1 * theta, tau2 * theta, model}, drive};
  return p;
}

RunConfig::Point RunConfig::at(double v) const {
  Point p = base();
  switch (sweep.axis) {
    case SweepAxis::Theta:
      p.baths.T1 = tau1 * v;
      p.baths.T2 = tau2 * v;
      break;
    case SweepAxis::Alpha: p.rotor.alpha = v; break;
    case SweepAxis::Omega0: p.drive.omega0 = v; break;
    case SweepAxis::T2: p.baths.T2 = v; break;
  }
  return p;
}

void validate_sweep(const SweepSpec& sweep) {
  if (sweep.grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 1; i < sweep.grid.size(); ++i) {
    if (!(sweep.grid[i] > sweep.grid[i - 1])) {
      throw ConfigError("sweep grid must be strictly increasing");
    }
  }
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        static const std::set<std::string> known{"rotor", "baths", "drive", "sweep", "sim"};
        if (!known.contains(section)) throw ConfigError("unknown section [" + section + "]");
        if (!seen.insert("[" + section).second) {
          throw ConfigError("section [" + section + "] appears twice");
        }
        if (section == "sim") cfg.sim = SimConfig{};
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const auto value = trim(line.substr(eq + 1));
      if (section.empty()) throw ConfigError("key '" + key + "' outside any section");
      if (value.empty()) throw ConfigError("key '" + key + "' has no value");
      if (!seen.insert(section + "." + key).second) {
        throw ConfigError("key '" + key + "' repeated in [" + section + "]");
      }
      auto num = [&] { return evaluate_expression(value); };
      auto unknown = [&] { throw ConfigError("unknown key '" + key + "' in [" + section + "]"); };

      if (section == "rotor") {
        if (key == "m") cfg.rotor.m = num();
        else if (key == "eta") cfg.rotor.eta = num();
        else if (key == "hbar") cfg.rotor.hbar = num();
        else if (key == "u1") cfg.rotor.u1 = num();
        else if (key == "u2") cfg.rotor.u2 = num();
        else if (key == "alpha") cfg.rotor.alpha = num();
        else unknown();
      } else if (section == "baths") {
        if (key == "model") {
          try {
            cfg.model = noise_model_from_string(value);
          } catch (const Error& e) {
            throw ConfigError(e.what());
          }
        } else if (key == "tau1") cfg.tau1 = num();
        else if (key == "tau2") cfg.tau2 = num();
        else if (key == "theta") cfg.theta = num();
        else unknown();
      } else if (section == "drive") {
        if (key == "D") cfg.drive.D = num();
        else if (key == "omega0") cfg.drive.omega0 = num();
        else unknown();
      } else if (section == "sweep") {
        if (key == "axis") cfg.sweep.axis = sweep_axis_from_string(value);
        else if (key == "grid") cfg.sweep.grid = parse_grid(value);
        else unknown();
      } else {
        auto& sim = *cfg.sim;
        if (key == "dt") sim.dt = num();
        else if (key == "n_steps") sim.n_steps = as_count(value, key);
        else if (key == "n_traj") sim.n_traj = as_count(value, key);
        else if (key == "burn_in_fraction") sim.burn_in_fraction = num();
        else if (key == "seed") sim.master_seed = as_count(value, key);
        else if (key == "x1") sim.initial.x1 = num();
        else if (key == "x2") sim.initial.x2 = num();
        else if (key == "v1") sim.initial.v1 = num();
        else if (key == "v2") sim.initial.v2 = num();
        else if (key == "rigid_body") sim.rigid_body = as_bool(value, key);
        else unknown();
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    cfg.rotor.validate();
    cfg.drive.validate();
    if (!(cfg.tau1 >= 0.0) || !(cfg.tau2 >= 0.0) || !(cfg.theta >= 0.0)) {
      throw ConfigError("tau1, tau2 and theta must be nonnegative");
    }
    if (cfg.sim) cfg.sim->validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[rotor]\n"
      << "m = " << fmt(cfg.rotor.m) << "\n"
      << "eta = " << fmt(cfg.rotor.eta) << "\n"
      << "hbar = " << fmt(cfg.rotor.hbar) << "\n"
      << "u1 = " << fmt(cfg.rotor.u1) << "\n"
      << "u2 = " << fmt(cfg.rotor.u2) << "\n"
      << "alpha = " << fmt(cfg.rotor.alpha) << "\n\n"
      << "[baths]\n"
      << "model = " << to_string(cfg.model) << "\n"
      << "tau1 = " << fmt(cfg.tau1) << "\n"
      << "tau2 = " << fmt(cfg.tau2) << "\n"
      << "theta = " << fmt(cfg.theta) << "\n\n"
      << "[drive]\n"
      << "D = " << fmt(cfg.drive.D) << "\n"
      << "omega0 = " << fmt(cfg.drive.omega0) << "\n\n"
      << "[sweep]\n"
      << "axis = " << to_string(cfg.sweep.axis) << "\n";
  if (!cfg.sweep.grid.empty()) {
    out << "grid = ";
    for (std::size_t i = 0; i < cfg.sweep.grid.size(); ++i) {
      out << (i ? ", " : "") << fmt(cfg.sweep.grid[i]);
    }
    out << "\n";
  }
  if (cfg.sim) {
    const auto& s = *cfg.sim;
    out << "\n[sim]\n"
        << "dt = " << fmt(s.dt) << "\n"
        << "n_steps = " << s.n_steps << "\n"
        << "n_traj = " << s.n_traj << "\n"
        << "burn_in_fraction = " << fmt(s.burn_in_fraction) << "\n"
        << "seed = " << s.master_seed << "\n"
        << "x1 = " << fmt(s.initial.x1) << "\n"
        << "x2 = " << fmt(s.initial.x2) << "\n"
        << "v1 = " << fmt(s.initial.v1) << "\n"
        << "v2 = " << fmt(s.initial.v2) << "\n"
        << "rigid_body = " << (s.rigid_body ? "true" : "false") << "\n";
  }
  return out.str();
}

}  // namespace rotor_lab
