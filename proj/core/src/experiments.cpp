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

#include "nbpm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "nbpm/error.hpp"
#include "nbpm/rng.hpp"

namespace nbpm {
namespace {

constexpr std::pair<ProcessKind, std::string_view> kProcessNames[] = {
    {ProcessKind::dirichlet, "dirichlet"},   {ProcessKind::extended_dp, "extended_dp"},
    {ProcessKind::pkp, "pkp"},               {ProcessKind::pdp_series, "pdp_series"},
    {ProcessKind::pdp_stick, "pdp_stick"},   {ProcessKind::stable, "stable"},
};

double require(const std::optional<double>& value, std::string_view name,
               ProcessKind process) {
  if (!value) {
    throw DomainError(std::string(to_string(process)) + " requires parameter " +
                      std::string(name));
  }
  return *value;
}

LevyTail pkp_tail(const ProcessParams& p) {
  switch (p.tail) {
    case TailKind::stable:
      return LevyTail::stable(require(p.alpha, "alpha", ProcessKind::pkp));
    case TailKind::gamma:
      return LevyTail::gamma(require(p.theta, "theta", ProcessKind::pkp));
    case TailKind::generalized_gamma:
      return LevyTail::generalized_gamma(require(p.alpha, "alpha", ProcessKind::pkp));
  }
  throw DomainError("unknown tail kind");
}

ExtendedDpParams extended_params(const ProcessParams& p, const TruncationPolicy& trunc) {
  if (trunc.mode != TruncationPolicy::Mode::fixed_count) {
    throw DomainError("extended_dp requires fixed-count truncation");
  }
  ExtendedDpParams e;
  e.concentration = require(p.theta, "theta", ProcessKind::extended_dp);
  const double r = p.r.value_or(0.0);
  if (!is_integer_order(r)) throw DomainError("extended_dp requires integer r >= 0");
  e.r = static_cast<std::size_t>(r);
  e.n = trunc.n;
  return e;
}

double ranked_weight(const DiscreteMeasure& m, std::size_t rank) {
  std::vector<double> w = m.weights();
  if (rank >= w.size()) return 0.0;
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank), w.end(),
                   std::greater<>());
  return w[rank];
}

}  // namespace

std::string_view to_string(ProcessKind kind) {
  for (const auto& [k, name] : kProcessNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ProcessKind process_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kProcessNames) {
    if (n == name) return k;
  }
  throw DomainError("unknown process '" + std::string(name) + "'");
}

DiscreteMeasure build_measure(ProcessKind process, const ProcessParams& p,
                              const TruncationPolicy& trunc, const BaseMeasure& base,
                              std::uint64_t seed) {
  switch (process) {
    case ProcessKind::dirichlet:
      return sample_dp(require(p.theta, "theta", process), base, trunc, seed);
    case ProcessKind::extended_dp:
      return sample_extended_dp_finite(extended_params(p, trunc), base, seed);
    case ProcessKind::pkp:
      return sample_pkp(require(p.r, "r", process), pkp_tail(p), base, trunc, seed);
    case ProcessKind::pdp_series: {
      PdpParams pdp{require(p.alpha, "alpha", process), require(p.theta, "theta", process)};
      pdp.validate();
      if (!p.r) return sample_pdp_series(pdp, base, trunc, seed);
      DiscreteMeasure m = sample_pkp(*p.r, LevyTail::generalized_gamma(pdp.alpha), base,
                                     trunc, seed);
      Provenance prov = m.provenance();
      prov.process = "pdp_series";
      prov.parameters["theta"] = pdp.theta;
      return DiscreteMeasure(m.atoms(), m.weights(), m.sorted_by_weight(),
                             std::move(prov));
    }
    case ProcessKind::pdp_stick:
      return sample_pdp_stick_breaking(require(p.alpha, "alpha", process),
                                       require(p.theta, "theta", process), base,
                                       p.sticks, p.ranked, seed);
    case ProcessKind::stable:
      return sample_stable_normalized(require(p.alpha, "alpha", process), base, trunc,
                                      seed);
  }
  throw DomainError("unknown process kind");
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(jobs, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count && !stop; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double kolmogorov_distance(const DiscreteMeasure& m, const BaseMeasure& base) {
  if (!base.cdf) throw CapabilityError("Kolmogorov distance needs a base CDF");
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& atoms = m.atoms();
  const auto& weights = m.weights();
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

  double cumulative = 0.0;
  double d = 0.0;
  for (std::size_t j = 0; j < order.size();) {
    const double x = atoms[order[j]];
    double mass = 0.0;
    for (; j < order.size() && atoms[order[j]] == x; ++j) mass += weights[order[j]];
    const double h = base.cdf(x);
    d = std::max(d, std::fabs(cumulative - h));
    cumulative += mass;
    d = std::max(d, std::fabs(cumulative - h));
  }
  return std::min(d, 1.0);
}

void ExperimentSpec::validate() const {
  if (replications < 1) throw DomainError("replications must be >= 1");
  truncation.validate();
  switch (process) {
    case ProcessKind::dirichlet:
      require(params.theta, "theta", process);
      break;
    case ProcessKind::extended_dp:
      extended_params(params, truncation).validate();
      break;
    case ProcessKind::pkp:
      require(params.r, "r", process);
      (void)pkp_tail(params);
      break;
    case ProcessKind::pdp_series:
    case ProcessKind::pdp_stick:
      PdpParams{require(params.alpha, "alpha", process),
                require(params.theta, "theta", process)}
          .validate();
      if (process == ProcessKind::pdp_stick && params.sticks < 1) {
        throw DomainError("pdp_stick requires sticks >= 1");
      }
      break;
    case ProcessKind::stable:
      (void)LevyTail::stable(require(params.alpha, "alpha", process));
      break;
  }
  if (params.r && !(*params.r >= 0.0 && std::isfinite(*params.r))) {
    throw DomainError("r must be finite and >= 0");
  }
}

ExperimentResult run_ks_experiment(const ExperimentSpec& spec, const BaseMeasure& base) {
  spec.validate();
  if (!base.cdf) throw CapabilityError("Kolmogorov distance needs a base CDF");
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> distances(spec.replications, 0.0);
  std::vector<std::string> failures(spec.replications);
  parallel_for(spec.replications, spec.parallelism, [&](std::size_t i) {
    try {
      const DiscreteMeasure m = build_measure(spec.process, spec.params, spec.truncation,
                                              base, mix_seed(spec.master_seed, i));
      distances[i] = kolmogorov_distance(m, base);
    } catch (const std::exception& e) {
      failures[i] = e.what();
      if (failures[i].empty()) failures[i] = "unknown failure";
    }
  });

  ExperimentResult result;
  result.spec_echo = spec;
  std::vector<double> ok;
  ok.reserve(spec.replications);
  for (std::size_t i = 0; i < spec.replications; ++i) {
    if (failures[i].empty()) {
      ok.push_back(distances[i]);
    } else {
      if (result.failed_replications == 0) result.first_failure = failures[i];
      ++result.failed_replications;
    }
  }
  const stats::Summary s = stats::summarize(ok);
  result.mean_distance = s.mean;
  result.std_error = s.std_error;
  result.replications = s.count;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

WeightProfile weight_profile(const LevyTail& tail, std::span<const double> r_grid,
                             std::size_t top_k, std::size_t replications,
                             std::uint64_t seed, std::size_t points, unsigned jobs) {
  if (top_k < 1) throw DomainError("top_k must be >= 1");
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (points < 2) throw DomainError("weight profile needs at least two points");
  WeightProfile out;
  out.r_grid.assign(r_grid.begin(), r_grid.end());
  out.top_k = top_k;
  out.replications = replications;
  const BaseMeasure base = BaseMeasure::uniform01();

  for (double r : r_grid) {
    const std::size_t n =
        is_integer_order(r) ? static_cast<std::size_t>(r) + points : points;
    const TruncationPolicy trunc = TruncationPolicy::fixed(n);
    std::vector<std::vector<double>> tops(replications);
    parallel_for(replications, jobs, [&](std::size_t i) {
      const DiscreteMeasure m = sample_pkp(r, tail, base, trunc, mix_seed(seed, i));
      std::vector<double> w = m.weights();
      std::sort(w.begin(), w.end(), std::greater<>());
      w.resize(top_k, 0.0);
      tops[i] = std::move(w);
    });
    std::vector<double> row(top_k, 0.0);
    std::vector<double> column(replications);
    for (std::size_t k = 0; k < top_k; ++k) {
      for (std::size_t i = 0; i < replications; ++i) column[i] = tops[i][k];
      row[k] = stats::summarize(column).mean;
    }
    out.mean_weights.push_back(std::move(row));
  }
  return out;
}

GrowthDiagnostic clustering_growth(const GrowthSpec& spec,
                                   std::span<const std::size_t> n_grid,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned jobs) {
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (n_grid.empty()) throw DomainError("n_grid must not be empty");
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    if (n_grid[j] < 1 || (j > 0 && n_grid[j] <= n_grid[j - 1])) {
      throw DomainError("n_grid must be positive and strictly increasing");
    }
  }
  double alpha = 0.0;
  if (spec.normalizer == GrowthNormalizer::n_pow_alpha) {
    alpha = require(spec.params.alpha, "alpha", spec.process);
  }
  const BaseMeasure base = BaseMeasure::uniform01();

  GrowthDiagnostic out;
  out.n_grid.assign(n_grid.begin(), n_grid.end());
  out.normalizer = spec.normalizer;
  out.normalizer_alpha = alpha;
  out.replications = replications;
  std::vector<double> counts(replications);
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    const std::size_t n = n_grid[j];
    parallel_for(replications, jobs, [&](std::size_t i) {
      const std::uint64_t rep_seed = mix_seed(seed, j * replications + i);
      const DiscreteMeasure m =
          build_measure(spec.process, spec.params, spec.truncation, base, rep_seed);
      const std::vector<double> draws = draw_from_measure(m, n, rep_seed);
      counts[i] = static_cast<double>(distinct_count(draws));
    });
    const stats::Summary s = stats::summarize(counts);
    const double norm = spec.normalizer == GrowthNormalizer::log_n
                            ? std::log(static_cast<double>(n))
                            : std::pow(static_cast<double>(n), alpha);
    out.kn_means.push_back(s.mean);
    out.kn_std_errors.push_back(s.std_error);
    out.ratios.push_back(norm > 0.0 ? s.mean / norm
                                    : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

namespace {

std::vector<double> ranked_weight_sample(const RankedWeightSource& src,
                                         std::size_t replications, std::uint64_t seed,
                                         std::uint64_t side, std::size_t rank,
                                         unsigned jobs) {
  const BaseMeasure base = BaseMeasure::uniform01();
  std::vector<double> out(replications);
  parallel_for(replications, jobs, [&](std::size_t i) {
    const std::uint64_t s = mix_seed(seed, 2 * i + side);
    if (src.method == RankedWeightSource::Method::series) {
      out[i] = ranked_weight(sample_pdp_series(PdpParams{src.alpha, src.theta}, base,
                                               TruncationPolicy::fixed(src.truncation),
                                               s),
                             rank);
    } else {
      out[i] = ranked_weight(sample_pdp_stick_breaking(src.alpha, src.theta, base,
                                                       src.truncation, true, s),
                             rank);
    }
  });
  return out;
}

}  // namespace

stats::KsTestResult compare_ranked_weights(const RankedWeightSource& a,
                                           const RankedWeightSource& b,
                                           std::size_t replications,
                                           std::uint64_t seed, std::size_t rank,
                                           unsigned jobs) {
  if (replications < 1) throw DomainError("replications must be >= 1");
  const auto xs = ranked_weight_sample(a, replications, seed, 0, rank, jobs);
  const auto ys = ranked_weight_sample(b, replications, seed, 1, rank, jobs);
  return stats::ks_two_sample(xs, ys);
}

stats::KsTestResult rank_weight_equivalence_test(double alpha, double theta,
                                                 std::size_t replications,
                                                 std::uint64_t seed, unsigned jobs) {
  PdpParams{alpha, theta}.validate();
  if (replications < 100) {
    throw DomainError("rank weight equivalence test needs >= 100 replications");
  }
  const RankedWeightSource series{RankedWeightSource::Method::series, alpha, theta, 1000};
  const RankedWeightSource sticks{RankedWeightSource::Method::stick_breaking, alpha,
                                  theta, 2000};
  return compare_ranked_weights(series, sticks, replications, seed, 0, jobs);
}

}  // namespace nbpm
