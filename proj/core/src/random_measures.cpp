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

#include "nbpm/random_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nbpm/error.hpp"
#include "nbpm/special_functions.hpp"

namespace nbpm {
namespace {

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

std::vector<double> draw_atoms(const BaseMeasure& base, std::size_t count,
                               std::uint64_t seed) {
  if (!base.sampler) throw DomainError("base measure has no sampler");
  Xoshiro256ss rng(derive_seed(seed, Substream::atoms));
  std::vector<double> atoms;
  atoms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) atoms.push_back(base.sampler(rng));
  return atoms;
}

void add_tail_parameters(Provenance& prov, const LevyTail& tail) {
  prov.tail = std::string(to_string(tail.kind()));
  if (tail.kind() == TailKind::gamma) {
    prov.parameters["theta"] = tail.theta();
  } else {
    prov.parameters["alpha"] = tail.alpha();
  }
}

}  // namespace

BaseMeasure BaseMeasure::uniform01() {
  return BaseMeasure{
      [](Xoshiro256ss& rng) { return rng.uniform(); },
      [](double x) { return std::clamp(x, 0.0, 1.0); },
      "uniform01",
  };
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms,
                                 std::vector<double> weights,
                                 bool sorted_by_weight, Provenance provenance)
    : atoms_(std::move(atoms)),
      weights_(std::move(weights)),
      sorted_by_weight_(sorted_by_weight),
      provenance_(std::move(provenance)) {
  if (atoms_.empty()) throw DomainError("a discrete measure needs at least one atom");
  if (atoms_.size() != weights_.size()) {
    throw DomainError("atoms and weights differ in length");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError("measure weights must be finite and positive");
    }
  }
  const double total = compensated_sum(weights_);
  if (std::fabs(total - 1.0) > kNormalizationTolerance) {
    throw DomainError("measure weights do not sum to 1");
  }
  if (sorted_by_weight_) {
    for (std::size_t i = 1; i < weights_.size(); ++i) {
      if (!(weights_[i] < weights_[i - 1])) {
        throw DomainError("weights flagged as sorted are not strictly decreasing");
      }
    }
  }
}

DiscreteMeasure DiscreteMeasure::from_log_weights(std::vector<double> atoms,
                                                  std::span<const double> log_weights,
                                                  bool sorted_by_weight,
                                                  Provenance provenance) {
  if (atoms.size() != log_weights.size()) {
    throw DomainError("atoms and weights differ in length");
  }
  if (log_weights.empty()) throw DomainError("a discrete measure needs at least one atom");
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw DomainError("log weights must be finite");

  std::vector<double> scaled(log_weights.size());
  std::transform(log_weights.begin(), log_weights.end(), scaled.begin(),
                 [top](double lw) { return std::exp(lw - top); });
  const double total = compensated_sum(scaled);

  std::vector<double> kept_atoms;
  std::vector<double> weights;
  kept_atoms.reserve(atoms.size());
  weights.reserve(atoms.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    const double w = scaled[i] / total;
    // Subnormal weights lose precision and can tie, so they count as underflow.
    if (w >= std::numeric_limits<double>::min()) {
      kept_atoms.push_back(atoms[i]);
      weights.push_back(w);
    } else {
      ++provenance.dropped_underflow;
    }
  }
  return DiscreteMeasure(std::move(kept_atoms), std::move(weights),
                         sorted_by_weight, std::move(provenance));
}

double DiscreteMeasure::mass_in(double lo, double hi) const {
  std::vector<double> inside;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] >= lo && atoms_[i] <= hi) inside.push_back(weights_[i]);
  }
  return compensated_sum(inside);
}

void PdpParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("PDP alpha must lie in (0, 1)");
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("the series representation of the PDP requires theta > 0");
  }
}

void ExtendedDpParams::validate() const {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw DomainError("extended DP concentration must be > 0");
  }
  if (!(n > r + 1)) throw DomainError("extended DP requires n > r + 1");
  if (n > kMaxArrivalCount) throw ResourceError("extended DP truncation level too large");
}

DiscreteMeasure sample_pkp(double r, const LevyTail& tail, const BaseMeasure& base,
                           const TruncationPolicy& trunc, std::uint64_t seed,
                           NbpRepresentation representation) {
  const PointSequence points =
      sample_nbp_points(NbpConfig{r, tail, trunc, representation}, seed);
  if (points.size() < 2) {
    throw DegenerateTruncationError("truncation retained fewer than two points");
  }
  Provenance prov;
  prov.process = "pkp";
  add_tail_parameters(prov, tail);
  prov.parameters["r"] = r;
  prov.truncation = trunc;
  prov.seed = seed;
  prov.base = base.label;
  prov.truncation_capped = points.cap_reached;
  return DiscreteMeasure::from_log_weights(draw_atoms(base, points.size(), seed),
                                           points.log_values, true, std::move(prov));
}

DiscreteMeasure sample_dp(double theta, const BaseMeasure& base,
                          const TruncationPolicy& trunc, std::uint64_t seed) {
  DiscreteMeasure m = sample_pkp(0.0, LevyTail::gamma(theta), base, trunc, seed);
  Provenance prov = m.provenance();
  prov.process = "dirichlet";
  return DiscreteMeasure(m.atoms(), m.weights(), true, std::move(prov));
}

DiscreteMeasure sample_extended_dp_finite(const ExtendedDpParams& params,
                                          const BaseMeasure& base,
                                          std::uint64_t seed) {
  params.validate();
  ArrivalGenerator gen(derive_seed(seed, Substream::arrivals));
  std::vector<double> arrivals(params.n + 1);
  for (double& g : arrivals) g = gen.next();

  const double gamma_r = params.r == 0 ? 1.0 : arrivals[params.r - 1];
  const double gamma_last = arrivals[params.n];
  const double shape = params.concentration / static_cast<double>(params.n);

  std::vector<double> log_weights;
  log_weights.reserve(params.n - params.r);
  for (std::size_t i = params.r + 1; i <= params.n; ++i) {
    const double y = arrivals[i - 1] / (gamma_r * gamma_last);
    if (!(y > 0.0 && y < 1.0)) {
      throw DomainError("extended DP quantile argument left (0, 1)");
    }
    log_weights.push_back(gamma_quantile_upper(shape, y));
  }

  Provenance prov;
  prov.process = "extended_dp";
  prov.tail = "gamma";
  prov.parameters = {{"theta", params.concentration},
                     {"r", static_cast<double>(params.r)},
                     {"n", static_cast<double>(params.n)}};
  prov.truncation = TruncationPolicy::fixed(params.n, kMaxArrivalCount);
  prov.seed = seed;
  prov.base = base.label;
  DiscreteMeasure m = DiscreteMeasure::from_log_weights(
      draw_atoms(base, log_weights.size(), seed), log_weights, true, std::move(prov));
  if (m.size() < 2) {
    throw DegenerateTruncationError("extended DP retained fewer than two weights");
  }
  return m;
}

DiscreteMeasure sample_pdp_series(const PdpParams& params, const BaseMeasure& base,
                                  const TruncationPolicy& trunc, std::uint64_t seed) {
  params.validate();
  DiscreteMeasure m = sample_pkp(params.r_derived(),
                                 LevyTail::generalized_gamma(params.alpha), base,
                                 trunc, seed, NbpRepresentation::randomized_intensity);
  Provenance prov = m.provenance();
  prov.process = "pdp_series";
  prov.parameters["theta"] = params.theta;
  return DiscreteMeasure(m.atoms(), m.weights(), true, std::move(prov));
}

DiscreteMeasure sample_pdp_stick_breaking(double alpha, double theta,
                                          const BaseMeasure& base,
                                          std::size_t sticks, bool ranked,
                                          std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("stick-breaking alpha must lie in [0, 1)");
  }
  if (!(theta > -alpha) || !std::isfinite(theta)) {
    throw DomainError("stick-breaking requires theta > -alpha");
  }
  if (sticks < 1) throw DomainError("stick-breaking requires at least one stick");
  if (sticks >= kMaxArrivalCount) throw ResourceError("too many sticks");

  Xoshiro256ss rng(derive_seed(seed, Substream::sticks));
  std::vector<double> log_weights;
  log_weights.reserve(sticks + 1);
  double log_remaining = 0.0;
  for (std::size_t k = 1; k <= sticks; ++k) {
    // β = X / (X + Y) with X ~ Gamma(1-α), Y ~ Gamma(θ+kα), kept in logs so
    // that neither β nor 1-β rounds to 0 or 1.
    const double lx = log_gamma_variate(rng, 1.0 - alpha);
    const double ly = log_gamma_variate(rng, theta + static_cast<double>(k) * alpha);
    const double hi = std::max(lx, ly);
    const double log_total = hi + std::log(std::exp(lx - hi) + std::exp(ly - hi));
    log_weights.push_back(log_remaining + lx - log_total);
    log_remaining += ly - log_total;
  }
  log_weights.push_back(log_remaining);

  std::vector<double> atoms = draw_atoms(base, log_weights.size(), seed);
  if (ranked) {
    std::vector<std::size_t> order(log_weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return log_weights[a] > log_weights[b];
    });
    std::vector<double> sorted_logs;
    std::vector<double> sorted_atoms;
    sorted_logs.reserve(order.size());
    sorted_atoms.reserve(order.size());
    for (std::size_t i : order) {
      sorted_logs.push_back(log_weights[i]);
      sorted_atoms.push_back(atoms[i]);
    }
    log_weights = std::move(sorted_logs);
    atoms = std::move(sorted_atoms);
  }

  Provenance prov;
  prov.process = "pdp_stick";
  prov.parameters = {{"alpha", alpha},
                     {"theta", theta},
                     {"sticks", static_cast<double>(sticks)},
                     {"ranked", ranked ? 1.0 : 0.0}};
  prov.seed = seed;
  prov.base = base.label;
  return DiscreteMeasure::from_log_weights(std::move(atoms), log_weights, ranked,
                                           std::move(prov));
}

DiscreteMeasure sample_stable_normalized(double alpha, const BaseMeasure& base,
                                         const TruncationPolicy& trunc,
                                         std::uint64_t seed) {
  DiscreteMeasure m = sample_pkp(0.0, LevyTail::stable(alpha), base, trunc, seed);
  Provenance prov = m.provenance();
  prov.process = "stable";
  return DiscreteMeasure(m.atoms(), m.weights(), true, std::move(prov));
}

std::vector<double> draw_from_measure(const DiscreteMeasure& m, std::size_t k,
                                      std::uint64_t seed) {
  std::vector<double> cumulative(m.size());
  std::partial_sum(m.weights().begin(), m.weights().end(), cumulative.begin());
  Xoshiro256ss rng(derive_seed(seed, Substream::draws));
  std::vector<double> draws;
  draws.reserve(k);
  const double total = cumulative.back();
  for (std::size_t i = 0; i < k; ++i) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    draws.push_back(m.atoms()[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return draws;
}

std::size_t distinct_count(std::span<const double> draws) {
  if (draws.empty()) throw DomainError("distinct_count of an empty sample");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace nbpm
