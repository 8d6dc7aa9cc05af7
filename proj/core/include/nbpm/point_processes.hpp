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

#ifndef NBPM_POINT_PROCESSES_HPP_
#define NBPM_POINT_PROCESSES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nbpm/levy_tail.hpp"
#include "nbpm/rng.hpp"

namespace nbpm {

// Upper bound on any single arrival stream; larger requests are refused.
inline constexpr std::size_t kMaxArrivalCount = 100'000'000;

/// Unit-rate Poisson arrivals Γ₁ < Γ₂ < ..., the partial sums of i.i.d.
/// Exp(1) increments.
struct ArrivalStream {
  std::vector<double> arrivals;
  std::uint64_t seed = 0;
  std::string generator_id{kGeneratorId};
};

// Produces Γ₁, Γ₂, ... one at a time from a seeded generator.
class ArrivalGenerator {
 public:
  explicit ArrivalGenerator(std::uint64_t seed) : rng_(seed) {}
  double next() { return sum_ += exponential_variate(rng_); }

 private:
  Xoshiro256ss rng_;
  double sum_ = 0.0;
};

ArrivalStream gamma_arrivals(std::uint64_t seed, std::size_t count);

/// Where to stop the (infinite) point series.
///
/// fixed_count: keep arrival indices up to `n`; the integer-r negative
/// binomial series therefore keeps indices r+1..n.
/// epsilon_rule: stop at the first index whose point, relative to the running
/// sum of points so far, drops below `epsilon` (that point is kept).
/// `hard_cap` bounds the number of retained points in both modes.
struct TruncationPolicy {
  enum class Mode { fixed_count, epsilon_rule };

  Mode mode = Mode::fixed_count;
  std::size_t n = 400;
  double epsilon = 1e-6;
  std::size_t hard_cap = 1'000'000;

  static TruncationPolicy fixed(std::size_t n, std::size_t hard_cap = 1'000'000);
  static TruncationPolicy relative(double epsilon,
                                   std::size_t hard_cap = 1'000'000);

  void validate() const;

  friend bool operator==(const TruncationPolicy&,
                         const TruncationPolicy&) = default;
};

// How NBP(r, L) points are generated.
//   series:               L^{-1}(Γ_i / Γ_r), i > r (integer r only; Γ_0 = 1)
//   randomized_intensity: L^{-1}(Γ'_i / G), G ~ Gamma(r, 1) independent
//   automatic:            series for integer r, randomized otherwise
// The series lives on (0, L^{-1}(1)); the randomized form is the Poisson
// random measure with intensity G·L on all of (0, ∞).
enum class NbpRepresentation { automatic, series, randomized_intensity };

struct NbpConfig {
  double r = 0.0;
  LevyTail tail = LevyTail::gamma(1.0);
  TruncationPolicy truncation{};
  NbpRepresentation representation = NbpRepresentation::automatic;
};

/// A realized, truncated, strictly decreasing sequence of jump sizes, kept in
/// log form because tiny jumps underflow long before normalization.
struct PointSequence {
  std::vector<double> log_values;
  // The argument each point was inverted from: Γ_i, Γ_i / Γ_r or Γ'_i / G.
  std::vector<double> tail_arguments;
  // True if the epsilon rule had not fired when hard_cap was reached.
  bool cap_reached = false;

  std::size_t size() const { return log_values.size(); }
  std::vector<double> values() const;
};

// (L^{-1}(Γ_i))_i for the given arrivals: a Poisson random measure with
// mean measure L.
PointSequence sample_prm_points(const LevyTail& tail, const ArrivalStream& stream);

// Points of the negative binomial process NBP(r, L), truncated by cfg.
PointSequence sample_nbp_points(const NbpConfig& cfg, std::uint64_t seed);

// Whether r takes the literal series path rather than the randomized one.
bool is_integer_order(double r);

}  // namespace nbpm

#endif  // NBPM_POINT_PROCESSES_HPP_
