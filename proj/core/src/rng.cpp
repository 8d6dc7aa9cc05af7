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

#include "nbpm/rng.hpp"

#include <cmath>
#include <numbers>

#include "nbpm/error.hpp"

namespace nbpm {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed + index * kGolden;
  return splitmix64(state);
}

std::uint64_t derive_seed(std::uint64_t seed, Substream role) {
  // Arrivals reuse the seed itself so that a bare arrival stream and the
  // arrivals inside a sampler coincide for the same seed.
  if (role == Substream::arrivals) return seed;
  std::uint64_t state = seed ^ (static_cast<std::uint64_t>(role) * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Xoshiro256ss::result_type Xoshiro256ss::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256ss::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double exponential_variate(Xoshiro256ss& rng) { return -std::log(rng.uniform()); }

double normal_variate(Xoshiro256ss& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double log_gamma_variate(Xoshiro256ss& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma variate requires a finite shape > 0");
  }
  if (shape < 1.0) {
    const double boosted = log_gamma_variate(rng, shape + 1.0);
    return boosted + std::log(rng.uniform()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = normal_variate(rng);
    const double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
      return std::log(d) + std::log(v);
    }
  }
}

double gamma_variate(Xoshiro256ss& rng, double shape) {
  return std::exp(log_gamma_variate(rng, shape));
}

}  // namespace nbpm
