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

#ifndef NBPM_STATS_HPP_
#define NBPM_STATS_HPP_

#include <cstddef>
#include <functional>
#include <span>

namespace nbpm::stats {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;  // sqrt(variance / count)
  std::size_t count = 0;
};

// Summary of a sample, accumulated in input order (Welford).
Summary summarize(std::span<const double> values);

// Limiting Kolmogorov distribution Pr(K > lambda) = 2 Σ (-1)^{k-1} e^{-2k²λ²}.
double kolmogorov_survival(double lambda);

struct KsTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample KS test against a continuous CDF; asymptotic p-value with the
// (√n + 0.12 + 0.11/√n) small-sample correction.
KsTestResult ks_one_sample(std::span<const double> sample,
                           const std::function<double(double)>& cdf);

// Two-sample KS test, asymptotic p-value with effective size n·m/(n+m).
KsTestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Pr(χ²_dof > statistic).
double chi_square_survival(double statistic, double dof);

// Regularized incomplete beta I_x(a, b), the Beta(a, b) CDF.
double beta_cdf(double x, double a, double b);

}  // namespace nbpm::stats

#endif  // NBPM_STATS_HPP_
