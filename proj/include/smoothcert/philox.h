//
// Copyright 2026 The SmoothCert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, index), so a Monte-Carlo loop can be split across any number
// of workers and still reproduce the serial sequence exactly.

#ifndef SMOOTHCERT_PHILOX_H_
#define SMOOTHCERT_PHILOX_H_

#include <array>
#include <cstdint>

namespace smoothcert {

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter Generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      ctr = Round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter Round(const Counter& ctr, const Key& key) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
};

// A value-type handle on one deterministic stream of uniforms. Two samplers
// with equal (seed, stream_index) produce identical draws for every index.
struct SeededSampler {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;

  // 64 random bits for draw `index`.
  constexpr std::uint64_t Bits(std::uint64_t index) const {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream_index),
        static_cast<std::uint32_t>(stream_index >> 32)};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                                 static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::Generate(ctr, key);
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  constexpr double Uniform(std::uint64_t index) const {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(Bits(index) >> 11) + 0.5) * kScale;
  }

  // A child stream, for per-point or per-draw sub-sequences.
  constexpr SeededSampler Derive(std::uint64_t child) const {
    // Child streams live in the upper half of the stream space.
    return {seed, (stream_index << 32) ^ (child + 0x80000000ull)};
  }
};

}  // namespace smoothcert

#endif  // SMOOTHCERT_PHILOX_H_
