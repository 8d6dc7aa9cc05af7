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

#ifndef NBPM_EXPERIMENTS_HPP_
#define NBPM_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbpm/levy_tail.hpp"
#include "nbpm/point_processes.hpp"
#include "nbpm/random_measures.hpp"
#include "nbpm/stats.hpp"

namespace nbpm {

enum class ProcessKind { dirichlet, extended_dp, pkp, pdp_series, pdp_stick, stable };

std::string_view to_string(ProcessKind kind);
ProcessKind process_kind_from_string(std::string_view name);

/// Parameters of one measure constructor. Which fields are required depends
/// on the process:
///   dirichlet    theta
///   extended_dp  theta (the concentration), r (integer, default 0);
///                uses truncation.n as the level n
///   pkp          r, tail, and alpha or theta for that tail
///   pdp_series   alpha, theta; an explicit r replaces θ/α and switches to
///                the literal series (used to reproduce published tables)
///   pdp_stick    alpha, theta, sticks, ranked
///   stable       alpha
struct ProcessParams {
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<double> r;
  TailKind tail = TailKind::gamma;
  std::size_t sticks = 2000;
  bool ranked = true;

  friend bool operator==(const ProcessParams&, const ProcessParams&) = default;
};

// Builds one realization. Throws DomainError on missing or invalid params.
DiscreteMeasure build_measure(ProcessKind process, const ProcessParams& params,
                              const TruncationPolicy& trunc, const BaseMeasure& base,
                              std::uint64_t seed);

// Runs fn(0..count-1) on up to `jobs` threads. Exceptions from fn propagate
// (the first one wins) after all workers have stopped.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

// sup_x |F_m(x) − H(x)| for the step CDF F_m of m against a continuous base
// CDF H. Throws CapabilityError if base has no CDF.
double kolmogorov_distance(const DiscreteMeasure& m, const BaseMeasure& base);

struct ExperimentSpec {
  ProcessKind process = ProcessKind::pdp_series;
  ProcessParams params;
  std::size_t replications = 500;
  TruncationPolicy truncation = TruncationPolicy::fixed(400);
  std::uint64_t master_seed = 42;
  unsigned parallelism = 1;  // worker hint; never changes results

  // replications >= 1, valid truncation, and the parameters the process
  // needs are present and in range.
  void validate() const;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct ExperimentResult {
  double mean_distance = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(successful replications)
  std::size_t replications = 0;
  std::size_t failed_replications = 0;
  std::string first_failure;
  double wall_time = 0.0;  // seconds
  ExperimentSpec spec_echo;

  bool flagged() const { return failed_replications > 0; }
};

// Averages the Kolmogorov distance over independent replications with seeds
// mix_seed(master_seed, i). Deterministic in master_seed regardless of
// spec.parallelism.
ExperimentResult run_ks_experiment(const ExperimentSpec& spec, const BaseMeasure& base);

struct WeightProfile {
  std::vector<double> r_grid;
  std::size_t top_k = 0;
  std::size_t replications = 0;
  // mean_weights[row][k]: Monte Carlo mean of the (k+1)-th largest weight.
  std::vector<std::vector<double>> mean_weights;
};

// Mean of the top_k largest weights of PKP^(r)(H; L) for each r. Replication
// i uses seed mix_seed(seed, i) for every r. `points` is the number of series
// terms kept beyond index r.
WeightProfile weight_profile(const LevyTail& tail, std::span<const double> r_grid,
                             std::size_t top_k, std::size_t replications,
                             std::uint64_t seed, std::size_t points = 2000,
                             unsigned jobs = 1);

enum class GrowthNormalizer { log_n, n_pow_alpha };

struct GrowthDiagnostic {
  std::vector<std::size_t> n_grid;
  std::vector<double> kn_means;
  std::vector<double> kn_std_errors;
  GrowthNormalizer normalizer = GrowthNormalizer::log_n;
  double normalizer_alpha = 0.0;
  std::vector<double> ratios;  // kn_means / normalizer(n)
  std::size_t replications = 0;
};

struct GrowthSpec {
  ProcessKind process = ProcessKind::dirichlet;
  ProcessParams params;
  TruncationPolicy truncation = TruncationPolicy::fixed(2000);
  GrowthNormalizer normalizer = GrowthNormalizer::log_n;
};

// For each n, draws n observations from a fresh realization per replication
// and records the mean number of distinct values K_n. n_pow_alpha uses
// params.alpha.
GrowthDiagnostic clustering_growth(const GrowthSpec& spec,
                                   std::span<const std::size_t> n_grid,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned jobs = 1);

// One side of a largest-weight comparison.
struct RankedWeightSource {
  enum class Method { series, stick_breaking };
  Method method = Method::series;
  double alpha = 0.5;
  double theta = 1.0;
  std::size_t truncation = 1000;  // series points or sticks
};

// Two-sample KS test between the rank-th largest weights (rank 0 is the
// largest) of the two sources, `replications` independent draws each.
stats::KsTestResult compare_ranked_weights(const RankedWeightSource& a,
                                           const RankedWeightSource& b,
                                           std::size_t replications,
                                           std::uint64_t seed, std::size_t rank = 0,
                                           unsigned jobs = 1);

// The series representation against ranked stick-breaking at the same
// (alpha, theta). DomainError if replications < 100.
stats::KsTestResult rank_weight_equivalence_test(double alpha, double theta,
                                                 std::size_t replications,
                                                 std::uint64_t seed,
                                                 unsigned jobs = 1);

}  // namespace nbpm

#endif  // NBPM_EXPERIMENTS_HPP_
