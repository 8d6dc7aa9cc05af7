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

#ifndef NBPM_RANDOM_MEASURES_HPP_
#define NBPM_RANDOM_MEASURES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbpm/levy_tail.hpp"
#include "nbpm/point_processes.hpp"
#include "nbpm/rng.hpp"

namespace nbpm {

/// A diffuse distribution H on the real line from which atom locations are
/// drawn i.i.d., independently of the weights.
struct BaseMeasure {
  std::function<double(Xoshiro256ss&)> sampler;
  // Required by the Kolmogorov-distance harness.
  std::function<double(double)> cdf;
  std::string label;

  static BaseMeasure uniform01();
};

/// How a realized measure came about; serialized alongside it.
struct Provenance {
  std::string process;
  std::string tail;  // empty when no Lévy tail is involved
  std::map<std::string, double> parameters;
  std::optional<TruncationPolicy> truncation;
  std::uint64_t seed = 0;
  std::string generator_id{kGeneratorId};
  std::string base;
  // Atoms whose normalized weight underflowed and were dropped.
  std::size_t dropped_underflow = 0;
  bool truncation_capped = false;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// A finite random discrete probability measure Σ w_i δ_{atom_i}.
///
/// Invariants (checked on construction, DomainError otherwise): at least one
/// atom, atoms.size() == weights.size(), every weight finite and > 0,
/// |Σ w − 1| ≤ 1e-12, and weights strictly decreasing when
/// sorted_by_weight is set.
class DiscreteMeasure {
 public:
  static constexpr double kNormalizationTolerance = 1e-12;

  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights,
                  bool sorted_by_weight, Provenance provenance);

  // Normalizes exp(log_weights) with a log-sum-exp reduction. Weights below
  // the smallest normal double are dropped and counted in provenance.
  static DiscreteMeasure from_log_weights(std::vector<double> atoms,
                                          std::span<const double> log_weights,
                                          bool sorted_by_weight,
                                          Provenance provenance);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  bool sorted_by_weight() const { return sorted_by_weight_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return atoms_.size(); }

  // H-measure style evaluation: total weight of atoms in [lo, hi].
  double mass_in(double lo, double hi) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  bool sorted_by_weight_;
  Provenance provenance_;
};

struct PdpParams {
  double alpha = 0.5;
  double theta = 1.0;

  double r_derived() const { return theta / alpha; }
  void validate() const;
};

// Finite approximation of the extended Dirichlet process with gamma tail.
struct ExtendedDpParams {
  double concentration = 1.0;
  std::size_t r = 0;
  std::size_t n = 100;

  void validate() const;
};

// Normalized NBP(r, L) points on i.i.d. atoms from `base` (PKP^(r)(H; L)).
// Throws DegenerateTruncationError if fewer than two points are retained.
DiscreteMeasure sample_pkp(double r, const LevyTail& tail, const BaseMeasure& base,
                           const TruncationPolicy& trunc, std::uint64_t seed,
                           NbpRepresentation representation = NbpRepresentation::automatic);

// Dirichlet process DP(θ, H): sample_pkp with r = 0 and the gamma tail.
DiscreteMeasure sample_dp(double theta, const BaseMeasure& base,
                          const TruncationPolicy& trunc, std::uint64_t seed);

// Finite extended-DP approximation with weights G_n^{-1}(Γ_i / (Γ_r Γ_{n+1})),
// i = r+1..n, where G_n is the Gamma(concentration / n, 1) survival function.
DiscreteMeasure sample_extended_dp_finite(const ExtendedDpParams& params,
                                          const BaseMeasure& base,
                                          std::uint64_t seed);

// Poisson–Dirichlet PD(α, θ) through the negative binomial series with the
// generalized gamma tail and r = θ/α, always via the randomized intensity.
DiscreteMeasure sample_pdp_series(const PdpParams& params, const BaseMeasure& base,
                                  const TruncationPolicy& trunc, std::uint64_t seed);

// Stick-breaking with β_k ~ Beta(1-α, θ+kα). The residual mass after
// `sticks` breaks goes to one extra atom. Ranked output is sorted descending.
DiscreteMeasure sample_pdp_stick_breaking(double alpha, double theta,
                                          const BaseMeasure& base,
                                          std::size_t sticks, bool ranked,
                                          std::uint64_t seed);

// Normalized α-stable process: weights proportional to Γ_i^{-1/α}.
DiscreteMeasure sample_stable_normalized(double alpha, const BaseMeasure& base,
                                         const TruncationPolicy& trunc,
                                         std::uint64_t seed);

// k i.i.d. draws from the measure.
std::vector<double> draw_from_measure(const DiscreteMeasure& m, std::size_t k,
                                      std::uint64_t seed);

// Number of distinct values; DomainError on empty input.
std::size_t distinct_count(std::span<const double> draws);

}  // namespace nbpm

#endif  // NBPM_RANDOM_MEASURES_HPP_
