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

#include "nbpm/point_processes.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "nbpm/error.hpp"

namespace nbpm {
namespace {

// Inverts a stream of tail arguments y_1 < y_2 < ... (supplied as ln y_i by
// `next_log_argument`) and applies the truncation policy. `fixed_count` is
// the number of points to keep in fixed_count mode.
template <class NextLogArgument>
PointSequence invert_series(const LevyTail& tail, const TruncationPolicy& policy,
                            std::size_t fixed_count,
                            NextLogArgument&& next_log_argument) {
  PointSequence out;
  std::optional<double> hint;
  auto push_next = [&] {
    const double log_y = next_log_argument();
    const double log_point = log_tail_inverse(tail, log_y, hint);
    hint = log_point;
    out.log_values.push_back(log_point);
    out.tail_arguments.push_back(std::exp(log_y));
    return log_point;
  };

  if (policy.mode == TruncationPolicy::Mode::fixed_count) {
    if (fixed_count > policy.hard_cap) {
      throw ResourceError("fixed truncation keeps " + std::to_string(fixed_count) +
                          " points, above hard_cap " +
                          std::to_string(policy.hard_cap));
    }
    out.log_values.reserve(fixed_count);
    out.tail_arguments.reserve(fixed_count);
    for (std::size_t i = 0; i < fixed_count; ++i) push_next();
    return out;
  }

  const double log_eps = std::log(policy.epsilon);
  double log_running_sum = push_next();
  while (out.size() < policy.hard_cap) {
    const double log_point = push_next();
    log_running_sum += std::log1p(std::exp(log_point - log_running_sum));
    if (log_point - log_running_sum < log_eps) return out;
  }
  out.cap_reached = true;
  return out;
}

}  // namespace

ArrivalStream gamma_arrivals(std::uint64_t seed, std::size_t count) {
  if (count == 0) throw DomainError("gamma_arrivals requires count >= 1");
  if (count > kMaxArrivalCount) {
    throw ResourceError("arrival count " + std::to_string(count) +
                        " exceeds the limit of " + std::to_string(kMaxArrivalCount));
  }
  ArrivalStream stream;
  stream.seed = seed;
  stream.arrivals.reserve(count);
  ArrivalGenerator gen(derive_seed(seed, Substream::arrivals));
  for (std::size_t i = 0; i < count; ++i) stream.arrivals.push_back(gen.next());
  return stream;
}

TruncationPolicy TruncationPolicy::fixed(std::size_t n, std::size_t hard_cap) {
  TruncationPolicy p;
  p.mode = Mode::fixed_count;
  p.n = n;
  p.hard_cap = hard_cap;
  p.validate();
  return p;
}

TruncationPolicy TruncationPolicy::relative(double epsilon, std::size_t hard_cap) {
  TruncationPolicy p;
  p.mode = Mode::epsilon_rule;
  p.epsilon = epsilon;
  p.hard_cap = hard_cap;
  p.validate();
  return p;
}

void TruncationPolicy::validate() const {
  if (hard_cap < 1) throw DomainError("truncation hard_cap must be >= 1");
  if (mode == Mode::fixed_count) {
    if (n < 1) throw DomainError("fixed truncation requires n >= 1");
  } else if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon truncation requires 0 < epsilon < 1");
  }
}

std::vector<double> PointSequence::values() const {
  std::vector<double> out;
  out.reserve(log_values.size());
  for (double v : log_values) out.push_back(std::exp(v));
  return out;
}

bool is_integer_order(double r) {
  return r >= 0.0 && r <= static_cast<double>(kMaxArrivalCount) &&
         r == std::floor(r);
}

PointSequence sample_prm_points(const LevyTail& tail, const ArrivalStream& stream) {
  if (stream.arrivals.empty()) throw DomainError("arrival stream is empty");
  std::size_t i = 0;
  double previous = 0.0;
  return invert_series(
      tail, TruncationPolicy::fixed(stream.arrivals.size(), kMaxArrivalCount),
      stream.arrivals.size(), [&] {
        const double g = stream.arrivals[i++];
        if (!(g > previous)) {
          throw DomainError("arrival stream must be positive and strictly increasing");
        }
        previous = g;
        return std::log(g);
      });
}

PointSequence sample_nbp_points(const NbpConfig& cfg, std::uint64_t seed) {
  if (!(cfg.r >= 0.0) || !std::isfinite(cfg.r)) {
    throw DomainError("negative binomial order r must be finite and >= 0");
  }
  cfg.truncation.validate();
  const bool fixed = cfg.truncation.mode == TruncationPolicy::Mode::fixed_count;
  ArrivalGenerator gen(derive_seed(seed, Substream::arrivals));

  bool use_series = is_integer_order(cfg.r);
  if (cfg.representation == NbpRepresentation::series) {
    if (!use_series) throw DomainError("series representation requires integer r");
  } else if (cfg.representation == NbpRepresentation::randomized_intensity) {
    if (cfg.r == 0.0) throw DomainError("randomized intensity requires r > 0");
    use_series = false;
  }

  if (use_series) {
    const auto r = static_cast<std::size_t>(cfg.r);
    if (fixed && cfg.truncation.n <= r) {
      throw DegenerateTruncationError("fixed truncation n must exceed r");
    }
    // Γ_0 = 1 so that r = 0 is the plain Poisson random measure.
    double log_gamma_r = 0.0;
    if (r > 0) {
      double gamma_r = 0.0;
      for (std::size_t k = 0; k < r; ++k) gamma_r = gen.next();
      log_gamma_r = std::log(gamma_r);
    }
    const std::size_t count = fixed ? cfg.truncation.n - r : 0;
    return invert_series(cfg.tail, cfg.truncation, count,
                         [&] { return std::log(gen.next()) - log_gamma_r; });
  }

  Xoshiro256ss intensity_rng(derive_seed(seed, Substream::intensity));
  const double log_g = log_gamma_variate(intensity_rng, cfg.r);
  const std::size_t count = fixed ? cfg.truncation.n : 0;
  return invert_series(cfg.tail, cfg.truncation, count,
                       [&] { return std::log(gen.next()) - log_g; });
}

}  // namespace nbpm
