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

// Gaussian force traces with a prescribed power spectral density.
//
// Quantum traces are synthesized in the frequency domain on the grid
// w_k = 2 pi k / (N dt), k = 0..N/2: each mode is a complex Gaussian with
// E|X_k|^2 = S(w_k) N / dt (real at k = 0 and k = N/2), and the real trace is
// x_j = (1/N) sum_k X_k e^{2 pi i jk/N}. The periodogram |DFT x|^2 dt / N then
// has mean S(w_k). The Nyquist frequency pi/dt is the ultraviolet cutoff.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rotor_lab/core_model.hpp"

namespace rotor_lab {

/// Address of one random stream: master seed, trajectory index, bath index.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t trajectory = 0;
  std::uint32_t bath = 0;
};

struct NoiseTrace {
  std::vector<double> values;
  double dt = 0.0;
  NoiseModel model = NoiseModel::QuantumColored;
  double bath_temperature = 0.0;
  std::uint64_t seed = 0;
};

bool is_power_of_two(std::uint64_t n);

/// Colored trace with PSD eta hbar w coth(hbar w / 2T). Requires n_steps a
/// power of two (>= 2), dt > 0, T > 0, hbar > 0.
NoiseTrace synthesize_quantum_trace(double T, double eta, double hbar, double dt,
                                    std::uint64_t n_steps, std::uint64_t seed);
NoiseTrace synthesize_quantum_trace(double T, double eta, double hbar, double dt,
                                    std::uint64_t n_steps, const StreamId& stream);

/// i.i.d. N(0, 2 eta T / dt) samples. T = 0 gives zeros.
NoiseTrace synthesize_white_trace(double T, double eta, double dt, std::uint64_t n_steps,
                                  std::uint64_t seed);
NoiseTrace synthesize_white_trace(double T, double eta, double dt, std::uint64_t n_steps,
                                  const StreamId& stream);

struct Spectrum {
  std::vector<double> omega;  // w_k, k = 0..N/2
  std::vector<double> power;  // |DFT|^2 dt / N
};

/// One-sided sampled spectrum of a real trace of any length >= 2.
Spectrum periodogram(std::span<const double> values, double dt);
Spectrum periodogram(const NoiseTrace& trace);

/// Debug dump: 32-byte header (magic "RLNOISE1", uint64 N, double dt,
/// uint64 seed), then N little-endian doubles.
void write_trace_binary(const std::filesystem::path& path, const NoiseTrace& trace);
NoiseTrace read_trace_binary(const std::filesystem::path& path);

}  // namespace rotor_lab
