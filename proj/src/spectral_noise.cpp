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
#include "rotor_lab/spectral_noise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "rotor_lab/counter_rng.hpp"
#include "rotor_lab/errors.hpp"

namespace rotor_lab {

namespace {

constexpr char kMagic[8] = {'R', 'L', 'N', 'O', 'I', 'S', 'E', '1'};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// FFTW planning is not thread-safe; execution with new-array functions is.
// Plans are made once per length and kept for the process lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan c2r(int n) { return get(c2r_, n, true); }
  fftw_plan r2c(int n) { return get(r2c_, n, false); }

 private:
  fftw_plan get(std::map<int, fftw_plan>& plans, int n, bool inverse) {
    std::lock_guard lock(mutex_);
    if (auto it = plans.find(n); it != plans.end()) return it->second;
    auto re = alloc_real(static_cast<std::size_t>(n));
    auto cx = alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan = inverse ? fftw_plan_dft_c2r_1d(n, cx.get(), re.get(), FFTW_ESTIMATE)
                             : fftw_plan_dft_r2c_1d(n, re.get(), cx.get(), FFTW_ESTIMATE);
    if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
    plans.emplace(n, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<int, fftw_plan> c2r_;
  std::map<int, fftw_plan> r2c_;
};

// Mode standard deviations sqrt(S(w_k) N / dt), reused across the many traces
// of an ensemble. The cache is per thread, so no locking is needed.
std::shared_ptr<const std::vector<double>> mode_amplitudes(double T, double eta, double hbar,
                                                           double dt, int n) {
  using Key = std::tuple<double, double, double, double, int>;
  thread_local std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
  const Key key{T, eta, hbar, dt, n};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() >= 16) cache.clear();
  const int half = n / 2;
  auto amp = std::make_shared<std::vector<double>>(half + 1);
  const double dw = 2.0 * kPi / (n * dt);
  const double scale = n / dt;
  for (int k = 0; k <= half; ++k) (*amp)[k] = std::sqrt(bath_psd(k * dw, T, eta, hbar) * scale);
  cache.emplace(key, amp);
  return amp;
}

void require_steps(std::uint64_t n_steps) {
  if (n_steps < 2 || !is_power_of_two(n_steps)) {
    throw Error("trace length must be a power of two >= 2 (got " + std::to_string(n_steps) +
                ")");
  }
  if (n_steps > (std::uint64_t{1} << 30)) throw Error("trace length exceeds 2^30");
}

template <class T>
void write_le(std::ostream& out, T value) {
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <class T>
T read_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  in.read(bytes.data(), bytes.size());
  if (!in) throw Error("truncated noise trace file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

bool is_power_of_two(std::uint64_t n) { return std::has_single_bit(n); }

NoiseTrace synthesize_quantum_trace(double T, double eta, double hbar, double dt,
                                    std::uint64_t n_steps, const StreamId& stream) {
  require_steps(n_steps);
  if (!(dt > 0.0)) throw Error("noise timestep must be positive");
  if (!(T > 0.0)) throw Error("quantum noise requires T > 0");
  if (!(hbar > 0.0)) throw Error("quantum noise requires hbar > 0");
  if (!(eta >= 0.0)) throw Error("friction must be nonnegative");

  const int n = static_cast<int>(n_steps);
  const int half = n / 2;
  auto modes = alloc_complex(static_cast<std::size_t>(half + 1));
  auto out = alloc_real(static_cast<std::size_t>(n));
  PhiloxStream rng(stream.seed, stream.trajectory, stream.bath);
  const auto amp_ptr = mode_amplitudes(T, eta, hbar, dt, n);
  const auto& amp = *amp_ptr;
  const double root_half = std::sqrt(0.5);
  for (int k = 0; k <= half; ++k) {
    if (k == 0 || k == half) {
      modes[k][0] = amp[k] * rng.normal();
      modes[k][1] = 0.0;
    } else {
      const double sigma = root_half * amp[k];
      modes[k][0] = sigma * rng.normal();
      modes[k][1] = sigma * rng.normal();
    }
  }
  fftw_execute_dft_c2r(PlanCache::instance().c2r(n), modes.get(), out.get());

  NoiseTrace trace;
  trace.values.resize(n_steps);
  const double inv_n = 1.0 / n;
  for (int j = 0; j < n; ++j) trace.values[j] = out[j] * inv_n;
  trace.dt = dt;
  trace.model = NoiseModel::QuantumColored;
  trace.bath_temperature = T;
  trace.seed = stream.seed;
  return trace;
}

NoiseTrace synthesize_quantum_trace(double T, double eta, double hbar, double dt,
                                    std::uint64_t n_steps, std::uint64_t seed) {
  return synthesize_quantum_trace(T, eta, hbar, dt, n_steps, StreamId{seed, 0, 0});
}

NoiseTrace synthesize_white_trace(double T, double eta, double dt, std::uint64_t n_steps,
                                  const StreamId& stream) {
  if (!(dt > 0.0)) throw Error("noise timestep must be positive");
  if (!(T >= 0.0)) throw Error("temperature must be nonnegative");
  NoiseTrace trace;
  trace.values.assign(n_steps, 0.0);
  trace.dt = dt;
  trace.model = NoiseModel::ClassicalWhite;
  trace.bath_temperature = T;
  trace.seed = stream.seed;
  if (T == 0.0) return trace;
  PhiloxStream rng(stream.seed, stream.trajectory, stream.bath);
  const double sigma = std::sqrt(2.0 * eta * T / dt);
  for (auto& v : trace.values) v = sigma * rng.normal();
  return trace;
}

NoiseTrace synthesize_white_trace(double T, double eta, double dt, std::uint64_t n_steps,
                                  std::uint64_t seed) {
  return synthesize_white_trace(T, eta, dt, n_steps, StreamId{seed, 0, 0});
}

Spectrum periodogram(std::span<const double> values, double dt) {
  if (values.size() < 2) throw Error("periodogram needs at least two samples");
  if (values.size() > (std::size_t{1} << 30)) throw Error("periodogram input too long");
  const int n = static_cast<int>(values.size());
  const int half = n / 2;
  auto in = alloc_real(values.size());
  auto out = alloc_complex(static_cast<std::size_t>(half + 1));
  std::copy(values.begin(), values.end(), in.get());
  fftw_execute_dft_r2c(PlanCache::instance().r2c(n), in.get(), out.get());
  Spectrum spec;
  spec.omega.resize(half + 1);
  spec.power.resize(half + 1);
  const double dw = 2.0 * kPi / (n * dt);
  for (int k = 0; k <= half; ++k) {
    spec.omega[k] = k * dw;
    spec.power[k] = (out[k][0] * out[k][0] + out[k][1] * out[k][1]) * dt / n;
  }
  return spec;
}

Spectrum periodogram(const NoiseTrace& trace) { return periodogram(trace.values, trace.dt); }

void write_trace_binary(const std::filesystem::path& path, const NoiseTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint64_t>(out, trace.values.size());
  write_le<double>(out, trace.dt);
  write_le<std::uint64_t>(out, trace.seed);
  for (double v : trace.values) write_le<double>(out, v);
  if (!out) throw Error("failed writing " + path.string());
}

NoiseTrace read_trace_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(path.string() + " is not a noise trace file");
  }
  NoiseTrace trace;
  const auto n = read_le<std::uint64_t>(in);
  trace.dt = read_le<double>(in);
  trace.seed = read_le<std::uint64_t>(in);
  trace.bath_temperature = std::nan("");
  const auto body = in.tellg();
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(body);
  if (n > static_cast<std::uint64_t>(end - body) / sizeof(double)) {
    throw Error(path.string() + ": header claims " + std::to_string(n) +
                " samples but the file is shorter");
  }
  trace.values.resize(n);
  for (auto& v : trace.values) v = read_le<double>(in);
  return trace;
}

}  // namespace rotor_lab
