// Copyright 2026 The nbpm Authors.
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

#ifndef NBPM_RNG_HPP_
#define NBPM_RNG_HPP_

#include <cstdint>
#include <limits>
#include <string_view>

namespace nbpm {

// Name recorded in provenance for streams produced by Xoshiro256ss.
inline constexpr std::string_view kGeneratorId = "xoshiro256ss";

// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

// Per-replication seed: splitmix64 applied to
// master_seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index);

// Independent sub-stream seed for one role (arrivals, atoms, ...) of a sampler.
enum class Substream : std::uint64_t {
  arrivals = 0,
  atoms = 1,
  intensity = 2,
  draws = 3,
  sticks = 4,
};
std::uint64_t derive_seed(std::uint64_t seed, Substream role);

/// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

 private:
  std::uint64_t s_[4];
};

// Variates with fixed algorithms so sequences are identical on every
// platform and standard library.
double exponential_variate(Xoshiro256ss& rng);
double normal_variate(Xoshiro256ss& rng);
// Gamma(shape, 1), Marsaglia–Tsang; shape < 1 by the U^{1/shape} boost.
double gamma_variate(Xoshiro256ss& rng, double shape);
// ln of a Gamma(shape, 1) draw; stays finite for tiny shapes.
double log_gamma_variate(Xoshiro256ss& rng, double shape);

}  // namespace nbpm

#endif  // NBPM_RNG_HPP_
