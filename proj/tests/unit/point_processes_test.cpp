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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nbpm/error.hpp"
#include "nbpm/stats.hpp"

namespace nbpm {
namespace {

NbpConfig config(double r, LevyTail tail, TruncationPolicy trunc,
                 NbpRepresentation rep = NbpRepresentation::automatic) {
  return NbpConfig{r, std::move(tail), trunc, rep};
}

TEST(ArrivalsTest, PositiveAndStrictlyIncreasing) {
  const ArrivalStream one = gamma_arrivals(3, 1);
  ASSERT_EQ(one.arrivals.size(), 1u);
  EXPECT_GT(one.arrivals[0], 0.0);
  const ArrivalStream s = gamma_arrivals(3, 5000);
  EXPECT_EQ(s.arrivals.front(), one.arrivals.front());
  for (std::size_t i = 1; i < s.arrivals.size(); ++i) {
    ASSERT_GT(s.arrivals[i], s.arrivals[i - 1]);
  }
  EXPECT_EQ(s.seed, 3u);
  EXPECT_EQ(s.generator_id, kGeneratorId);
}

TEST(ArrivalsTest, RejectsBadCounts) {
  EXPECT_THROW(gamma_arrivals(1, 0), DomainError);
  EXPECT_THROW(gamma_arrivals(1, kMaxArrivalCount + 1), ResourceError);
}

TEST(ArrivalsTest, LawOfLargeNumbers) {
  std::vector<double> ratios(10000);
  for (std::size_t rep = 0; rep < ratios.size(); ++rep) {
    ArrivalGenerator gen(mix_seed(11, rep));
    double g = 0.0;
    for (int i = 0; i < 10000; ++i) g = gen.next();
    ratios[rep] = g / 10000.0;
  }
  const auto s = stats::summarize(ratios);
  EXPECT_NEAR(s.mean, 1.0, 4.0 * s.std_error);
}

TEST(PrmTest, StablePointsAreClosedForm) {
  const ArrivalStream s = gamma_arrivals(8, 200);
  const PointSequence p = sample_prm_points(LevyTail::stable(0.5), s);
  ASSERT_EQ(p.size(), 200u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p.values()[i], std::pow(s.arrivals[i], -2.0),
                1e-13 * std::pow(s.arrivals[i], -2.0));
    EXPECT_DOUBLE_EQ(p.tail_arguments[i], s.arrivals[i]);
  }
}

TEST(PrmTest, PointsStrictlyDecrease) {
  for (const LevyTail& tail : {LevyTail::gamma(3.0), LevyTail::generalized_gamma(0.5)}) {
    const PointSequence p = sample_prm_points(tail, gamma_arrivals(4, 1000));
    for (std::size_t i = 1; i < p.size(); ++i) {
      ASSERT_LT(p.log_values[i], p.log_values[i - 1]);
    }
  }
}

TEST(PrmTest, RejectsInvalidStreams) {
  ArrivalStream bad;
  EXPECT_THROW(sample_prm_points(LevyTail::gamma(1.0), bad), DomainError);
  bad.arrivals = {1.0, 0.5};
  EXPECT_THROW(sample_prm_points(LevyTail::gamma(1.0), bad), DomainError);
}

// Counts N_t = #{i : Γ_i ≤ t}: Poisson(t) by chi-square over pooled bins.
TEST(PrmTest, ArrivalCountsArePoisson) {
  const double t = 5.0;
  const int reps = 5000;
  std::vector<int> counts(reps);
  for (int rep = 0; rep < reps; ++rep) {
    ArrivalGenerator gen(mix_seed(2024, rep));
    int n = 0;
    while (gen.next() <= t) ++n;
    counts[rep] = n;
  }
  // Bins 0..1, 2, ..., 9, >= 10 (expected counts all >= 5).
  std::vector<double> observed(10, 0.0);
  for (int c : counts) observed[std::clamp(c, 1, 10) - 1] += 1.0;
  std::vector<double> prob(10, 0.0);
  double pk = std::exp(-t);
  double cumulative = 0.0;
  for (int k = 0; k <= 9; ++k) {
    prob[std::max(k, 1) - 1] += pk;
    cumulative += pk;
    pk *= t / (k + 1);
  }
  prob[9] = 1.0 - cumulative;
  double chi2 = 0.0;
  for (int b = 0; b < 10; ++b) {
    const double expected = prob[b] * reps;
    chi2 += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  EXPECT_GT(stats::chi_square_survival(chi2, 9.0), 0.001);
}

TEST(PrmTest, LaplaceFunctional) {
  const double c = 1.0;
  const double t = 2.0;
  std::vector<double> values(20000);
  for (std::size_t rep = 0; rep < values.size(); ++rep) {
    ArrivalGenerator gen(mix_seed(77, rep));
    int n = 0;
    while (gen.next() <= t) ++n;
    values[rep] = std::exp(-c * n);
  }
  const auto s = stats::summarize(values);
  EXPECT_NEAR(s.mean, std::exp(-t * (1.0 - std::exp(-c))), 4.0 * s.std_error);
}

TEST(NbpTest, OrderZeroIsThePlainPrm) {
  const LevyTail tail = LevyTail::gamma(2.0);
  const PointSequence nbp =
      sample_nbp_points(config(0.0, tail, TruncationPolicy::fixed(300)), 19);
  const PointSequence prm = sample_prm_points(tail, gamma_arrivals(19, 300));
  EXPECT_EQ(nbp.log_values, prm.log_values);
}

TEST(NbpTest, IntegerSeriesStaysBelowSupportBound) {
  for (const LevyTail& tail :
       {LevyTail::stable(0.5), LevyTail::gamma(3.0), LevyTail::generalized_gamma(0.9)}) {
    const double bound = tail_support_bound(tail);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PointSequence p = sample_nbp_points(config(5.0, tail, TruncationPolicy::fixed(60)), seed);
      ASSERT_EQ(p.size(), 55u);
      EXPECT_LT(p.values().front(), bound);
      for (double y : p.tail_arguments) ASSERT_GT(y, 1.0);
    }
  }
}

TEST(NbpTest, DeterministicGivenSeed) {
  const NbpConfig cfg = config(2.5, LevyTail::generalized_gamma(0.4),
                               TruncationPolicy::fixed(100));
  EXPECT_EQ(sample_nbp_points(cfg, 5).log_values, sample_nbp_points(cfg, 5).log_values);
  EXPECT_NE(sample_nbp_points(cfg, 5).log_values, sample_nbp_points(cfg, 6).log_values);
}

struct CountCase {
  double r;
  double t;
};

class NbpCountTest : public ::testing::TestWithParam<CountCase> {};

// #{i > r : Γ_i/Γ_r ≤ t} is negative binomial: mean r(t-1), variance r(t-1)t.
TEST_P(NbpCountTest, MixedPoissonMoments) {
  const auto [r, t] = GetParam();
  const int reps = 5000;
  const auto n = static_cast<std::size_t>(r) + 200;
  std::vector<double> counts(reps);
  std::vector<double> sq_dev(reps);
  for (int rep = 0; rep < reps; ++rep) {
    const PointSequence p = sample_nbp_points(
        config(r, LevyTail::stable(0.5), TruncationPolicy::fixed(n)), mix_seed(31, rep));
    ASSERT_GT(p.tail_arguments.back(), t);
    counts[rep] = static_cast<double>(
        std::count_if(p.tail_arguments.begin(), p.tail_arguments.end(),
                      [t = t](double y) { return y <= t; }));
  }
  const auto s = stats::summarize(counts);
  const double mean = r * (t - 1.0);
  const double variance = mean * t;
  EXPECT_NEAR(s.mean, mean, 4.0 * s.std_error);
  for (int i = 0; i < reps; ++i) sq_dev[i] = (counts[i] - s.mean) * (counts[i] - s.mean);
  const auto v = stats::summarize(sq_dev);
  EXPECT_NEAR(s.variance, variance, 4.0 * v.std_error);
}

INSTANTIATE_TEST_SUITE_P(Orders, NbpCountTest,
                         ::testing::Values(CountCase{1.0, 2.0}, CountCase{4.0, 2.0},
                                           CountCase{10.0, 1.5}));

// Randomized intensity: #{i : Γ'_i/G ≤ μ} is mixed Poisson with mean rμ and
// variance rμ(1+μ), also for non-integer r.
TEST(NbpTest, RandomizedIntensityCountMoments) {
  const double r = 2.5;
  const double mu = 1.0;
  std::vector<double> counts(5000);
  for (std::size_t rep = 0; rep < counts.size(); ++rep) {
    const PointSequence p = sample_nbp_points(
        config(r, LevyTail::stable(0.5), TruncationPolicy::fixed(200)), mix_seed(8, rep));
    counts[rep] = static_cast<double>(
        std::count_if(p.tail_arguments.begin(), p.tail_arguments.end(),
                      [&](double y) { return y <= mu; }));
  }
  const auto s = stats::summarize(counts);
  EXPECT_NEAR(s.mean, r * mu, 4.0 * s.std_error);
  EXPECT_NEAR(s.variance, r * mu * (1.0 + mu), 0.1 * r * mu * (1.0 + mu));
}

TEST(NbpTest, FixedCountSizes) {
  const LevyTail tail = LevyTail::gamma(1.0);
  EXPECT_EQ(sample_nbp_points(config(3.0, tail, TruncationPolicy::fixed(10)), 1).size(), 7u);
  EXPECT_EQ(sample_nbp_points(config(3.0, tail, TruncationPolicy::fixed(10),
                                     NbpRepresentation::randomized_intensity),
                              1)
                .size(),
            10u);
  EXPECT_EQ(sample_nbp_points(config(2.7, tail, TruncationPolicy::fixed(10)), 1).size(), 10u);
  EXPECT_THROW(sample_nbp_points(config(10.0, tail, TruncationPolicy::fixed(10)), 1),
               DegenerateTruncationError);
  EXPECT_THROW(sample_nbp_points(config(1.0, tail, TruncationPolicy::fixed(20, 10)), 1),
               ResourceError);
}

TEST(NbpTest, EpsilonRuleStopsAtRelativeThreshold) {
  const double eps = 1e-6;
  const PointSequence p = sample_nbp_points(
      config(2.0, LevyTail::gamma(3.0), TruncationPolicy::relative(eps)), 12);
  ASSERT_GE(p.size(), 2u);
  EXPECT_FALSE(p.cap_reached);
  const auto x = p.values();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    sum += x[i];
    if (i > 0) EXPECT_GE(x[i] / sum, eps);
  }
  sum += x.back();
  EXPECT_LT(x.back() / sum, eps);
}

TEST(NbpTest, EpsilonRuleReportsHardCap) {
  // Stable tails decay slowly; a tiny cap is hit first.
  const PointSequence p = sample_nbp_points(
      config(0.0, LevyTail::stable(0.9), TruncationPolicy::relative(1e-12, 50)), 3);
  EXPECT_TRUE(p.cap_reached);
  EXPECT_EQ(p.size(), 50u);
}

TEST(NbpTest, RejectsInvalidConfigs) {
  const LevyTail tail = LevyTail::gamma(1.0);
  EXPECT_THROW(sample_nbp_points(config(-1.0, tail, TruncationPolicy::fixed(10)), 1),
               DomainError);
  EXPECT_THROW(sample_nbp_points(config(NAN, tail, TruncationPolicy::fixed(10)), 1),
               DomainError);
  EXPECT_THROW(sample_nbp_points(config(1.5, tail, TruncationPolicy::fixed(10),
                                        NbpRepresentation::series),
                                 1),
               DomainError);
  EXPECT_THROW(sample_nbp_points(config(0.0, tail, TruncationPolicy::fixed(10),
                                        NbpRepresentation::randomized_intensity),
                                 1),
               DomainError);
}

TEST(TruncationPolicyTest, Validation) {
  EXPECT_THROW(TruncationPolicy::fixed(0), DomainError);
  EXPECT_THROW(TruncationPolicy::fixed(10, 0), DomainError);
  EXPECT_THROW(TruncationPolicy::relative(0.0), DomainError);
  EXPECT_THROW(TruncationPolicy::relative(1.0), DomainError);
  EXPECT_EQ(TruncationPolicy::fixed(400).n, 400u);
  EXPECT_EQ(TruncationPolicy::relative(1e-3).mode, TruncationPolicy::Mode::epsilon_rule);
}

TEST(IntegerOrderTest, Classification) {
  EXPECT_TRUE(is_integer_order(0.0));
  EXPECT_TRUE(is_integer_order(20.0));
  EXPECT_FALSE(is_integer_order(0.5));
  EXPECT_FALSE(is_integer_order(-1.0));
}

}  // namespace
}  // namespace nbpm
