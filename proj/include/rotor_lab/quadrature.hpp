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

// Globally adaptive 21-point Gauss-Kronrod integration and the frequency
// integrals \int dw/2pi over the real line built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "rotor_lab/core_model.hpp"

namespace rotor_lab {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Multiplies the largest physical frequency scale to give Omega_max.
  double cutoff_factor = 50.0;

  void validate() const;
};

template <class V>
struct QuadratureResult {
  V value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// QUADPACK qk21 abscissae and weights. xgk[1], xgk[3], ... are the 10-point
// Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class V>
struct Panel {
  double a;
  double b;
  V value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Error scaling follows QUADPACK: the raw |K - G| difference is sharpened by
// the resasc heuristic, since the Kronrod estimate is far better than the
// embedded Gauss one.
template <class V, class F>
Panel<V> gauss_kronrod_21(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const V fc = f(centre);
  V resk = kWgk[10] * fc;
  V resg{};
  double resabs = kWgk[10] * magnitude(fc);
  std::array<V, 10> f1{};
  std::array<V, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const V sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (magnitude(f1[j]) + magnitude(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const V reskh = 0.5 * resk;
  double resasc = kWgk[10] * magnitude(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (magnitude(f1[j] - reskh) + magnitude(f2[j] - reskh));
  }
  const double scale = std::abs(half);
  resasc *= scale;
  resabs *= scale;
  double err = magnitude((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * half, err};
}

}  // namespace detail

/// Globally adaptive GK21 over [breaks.front(), breaks.back()], starting from
/// the given breakpoints. Converged when the summed error estimate is below
/// max(abs_tol, rel_tol |I|).
template <class V, class F>
QuadratureResult<V> integrate_adaptive(const F& f, std::span<const double> breaks,
                                       double rel_tol, double abs_tol,
                                       int max_panels = 20000) {
  std::priority_queue<detail::Panel<V>> heap;
  QuadratureResult<V> out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (!(breaks[k + 1] > breaks[k])) continue;
    heap.push(detail::gauss_kronrod_21<V>(f, breaks[k], breaks[k + 1]));
    out.evaluations += 21;
  }
  auto totals = [&heap]() {
    V value{};
    double error = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };
  auto [value, error] = totals();
  while (!heap.empty() && static_cast<int>(heap.size()) < max_panels) {
    if (error <= std::max(abs_tol, rel_tol * detail::magnitude(value))) {
      out.converged = true;
      break;
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gauss_kronrod_21<V>(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_21<V>(f, mid, worst.b);
    out.evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // The running sums drift; resynchronise occasionally.
    if (out.evaluations % (42 * 256) == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  out.value = value;
  out.error = error;
  out.converged = error <= std::max(abs_tol, rel_tol * detail::magnitude(value));
  return out;
}

template <class V, class F>
QuadratureResult<V> integrate_adaptive(const F& f, double a, double b, double rel_tol,
                                       double abs_tol, int max_panels = 20000) {
  const std::array<double, 2> breaks{a, b};
  return integrate_adaptive<V>(f, std::span<const double>(breaks), rel_tol, abs_tol,
                               max_panels);
}

/// Omega_max = cutoff_factor * max(sqrt(u1/m), sqrt(u2/m), eta/m, 2 pi max(T)/hbar).
/// The thermal scale is dropped when the kernels are classical.
double cutoff_frequency(const RotorParams& params, const BathPair& baths,
                        const QuadratureConfig& cfg);

using RealKernel = std::function<double(double)>;
using ComplexKernel = std::function<Complex(double)>;

/// \int dw/2pi of an even real kernel over the whole line, evaluated as
/// (1/pi) [\int_0^Omega + \int_Omega^inf]. The tail is mapped onto (0, 1] with
/// w = Omega / t; TailTooFat is raised when it does not converge, which is
/// what happens for kernels decaying like 1/w or slower.
double integrate_even_kernel(const RealKernel& kernel, double omega_max,
                             const QuadratureConfig& cfg);

/// \int dw/2pi of a complex kernel over the whole line, folding w and -w onto
/// [0, inf). Returns the complex value so callers can check that the odd part
/// cancelled.
Complex integrate_full_line(const ComplexKernel& kernel, double omega_max,
                            const QuadratureConfig& cfg);

}  // namespace rotor_lab
