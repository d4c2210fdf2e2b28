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

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every random
// number is a pure function of (key, counter), so a stream is addressed by
// (master seed, trajectory, bath) and can be generated in any order.

#include <array>
#include <cmath>
#include <cstdint>

namespace rotor_lab {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Sequential view of one Philox stream. Counter words are
/// (block, bath, trajectory low, trajectory high); the key is the master seed.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t trajectory, std::uint32_t bath)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        bath_(bath),
        traj_lo_(static_cast<std::uint32_t>(trajectory)),
        traj_hi_(static_cast<std::uint32_t>(trajectory >> 32)) {}

  /// Uniform on (0, 1) with 53 random bits; never returns 0 or 1.
  double uniform() {
    if (pos_ == 2) refill();
    const std::uint64_t hi = buffer_[2 * pos_];
    const std::uint64_t lo = buffer_[2 * pos_ + 1];
    ++pos_;
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by the Marsaglia polar form of Box-Muller; the second
  /// value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double a = 0.0;
    double b = 0.0;
    double q = 0.0;
    do {
      a = 2.0 * uniform() - 1.0;
      b = 2.0 * uniform() - 1.0;
      q = a * a + b * b;
    } while (q >= 1.0 || q == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = b * scale;
    has_spare_ = true;
    return a * scale;
  }

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill() {
    buffer_ = philox4x32_10({block_, bath_, traj_lo_, traj_hi_}, key_);
    ++block_;
    pos_ = 0;
  }

  PhiloxKey key_;
  std::uint32_t bath_;
  std::uint32_t traj_lo_;
  std::uint32_t traj_hi_;
  std::uint32_t block_ = 0;
  PhiloxBlock buffer_{};
  int pos_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rotor_lab
