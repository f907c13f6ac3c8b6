// Copyright 2026 The wclt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCLT_RNG_HPP_
#define WCLT_RNG_HPP_

#include <cstdint>
#include <random>

namespace wclt {

// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t x);

// Counter-based seed splitting. The seed of item `index` in stream
// `stream` depends only on (base, stream, index), never on which worker
// draws it or in what order:
//
//   derive_seed(b, s, i) = mix64(mix64(b ^ mix64(s + G)) + (i + 1) * G)
//
// with G = 0x9e3779b97f4a7c15.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

// Well-known stream identifiers.
namespace streams {
inline constexpr std::uint64_t kReplication = 1;
inline constexpr std::uint64_t kCalibration = 2;
inline constexpr std::uint64_t kLimitPath = 3;
inline constexpr std::uint64_t kLimitSampling = 4;
inline constexpr std::uint64_t kBridge = 5;
}  // namespace streams

// 64-bit Mersenne Twister with platform-independent conversions to
// uniform and normal variates.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal by the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wclt

#endif  // WCLT_RNG_HPP_
