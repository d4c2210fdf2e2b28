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
#include "rotor_lab/quadrature.hpp"

#include <sstream>
#include <vector>

#include "rotor_lab/errors.hpp"

namespace rotor_lab {

namespace {

// Geometric breakpoints below Omega_max so the first pass already resolves the
// resonances near the physical scale.
std::vector<double> initial_breaks(double omega_max, double cutoff_factor) {
  std::vector<double> breaks{0.0};
  const double scale = omega_max / cutoff_factor;
  for (double w = scale / 16.0; w < omega_max; w *= 2.0) breaks.push_back(w);
  breaks.push_back(omega_max);
  return breaks;
}

template <class V, class F>
V integrate_half_line(const F& folded, double omega_max, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw NumericalError("quadrature cutoff must be positive and finite");
  }
  const auto breaks = initial_breaks(omega_max, cfg.cutoff_factor);
  const auto body = integrate_adaptive<V>(folded, std::span<const double>(breaks),
                                          cfg.rel_tol, cfg.abs_tol);
  if (!body.converged) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [0, " << omega_max << "] did not reach rel_tol "
        << cfg.rel_tol << " (error estimate " << body.error << ")";
    throw NonConvergent(msg.str());
  }
  auto mapped = [&](double t) -> V {
    const double w = omega_max / t;
    return folded(w) * (omega_max / (t * t));
  };
  const double tail_abs = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * detail::magnitude(body.value));
  const auto tail = integrate_adaptive<V>(mapped, 0.0, 1.0, cfg.rel_tol, tail_abs, 4000);
  if (!tail.converged || !std::isfinite(detail::magnitude(tail.value))) {
    std::ostringstream msg;
    msg << "tail beyond Omega_max=" << omega_max
        << " is not integrable to tolerance (estimate " << detail::magnitude(tail.value)
        << " +- " << tail.error << ")";
    throw TailTooFat(msg.str());
  }
  return body.value + tail.value;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw Error("quadrature rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw Error("quadrature abs_tol must be nonnegative");
  if (!(cutoff_factor >= 10.0)) throw Error("quadrature cutoff_factor must be >= 10");
}

double cutoff_frequency(const RotorParams& params, const BathPair& baths,
                        const QuadratureConfig& cfg) {
  double scale = std::max({std::sqrt(params.u1 / params.m), std::sqrt(params.u2 / params.m),
                           params.eta / params.m});
  if (!uses_classical_kernels(params, baths)) {
    scale = std::max(scale, 2.0 * kPi * std::max(baths.T1, baths.T2) / params.hbar);
  }
  return cfg.cutoff_factor * scale;
}

double integrate_even_kernel(const RealKernel& kernel, double omega_max,
                             const QuadratureConfig& cfg) {
  return integrate_half_line<double>(kernel, omega_max, cfg) / kPi;
}

Complex integrate_full_line(const ComplexKernel& kernel, double omega_max,
                            const QuadratureConfig& cfg) {
  auto folded = [&kernel](double w) { return kernel(w) + kernel(-w); };
  return integrate_half_line<Complex>(folded, omega_max, cfg) / (2.0 * kPi);
}

}  // namespace rotor_lab
