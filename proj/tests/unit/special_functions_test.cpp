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

#include "nbpm/special_functions.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nbpm/error.hpp"
#include "oracles.hpp"

namespace nbpm {
namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> xs;
  for (int i = 0; i < points; ++i) {
    xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return xs;
}

TEST(LogGammaTest, KnownValues) {
  EXPECT_EQ(log_gamma(1.0), 0.0);
  EXPECT_EQ(log_gamma(2.0), 0.0);
  EXPECT_NEAR(log_gamma(0.5), 0.57236494292470009, 1e-15);
}

TEST(LogGammaTest, MatchesQuadrature) {
  for (double a : {1e-4, 0.01, 0.3, 0.9, 1.5, 7.0, 30.0}) {
    EXPECT_NEAR(log_gamma(a), std::log(oracle::complete_gamma(a)), 1e-12) << a;
  }
}

TEST(LogGammaTest, RejectsInvalid) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.0), DomainError);
  EXPECT_THROW(log_gamma(NAN), DomainError);
  EXPECT_THROW(log_gamma(INFINITY), DomainError);
}

TEST(UpperIncompleteGammaTest, Examples) {
  EXPECT_NEAR(upper_incomplete_gamma(1.0, 2.0), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 1.0), 0.27880558528066198, 1e-15);
  EXPECT_NEAR(upper_incomplete_gamma(-0.5, 1.0), 0.17814771178156069, 1e-15);
  EXPECT_NEAR(upper_incomplete_gamma(-0.9, 30.0) / 1.3763634613189754e-16, 1.0, 1e-12);
  EXPECT_NEAR(upper_incomplete_gamma(-0.9, 1e-6) / 279090.43371216113, 1.0, 1e-12);
}

TEST(UpperIncompleteGammaTest, MatchesQuadratureOnLogGrid) {
  for (double a : {-0.9, -0.5, -0.1, 1e-3, 0.1, 0.5, 1.0, 2.5, 5.0}) {
    for (double x : log_grid(1e-6, 30.0, 25)) {
      EXPECT_LE(oracle::relative_error(upper_incomplete_gamma(a, x),
                                       oracle::upper_gamma(a, x)),
                1e-8)
          << "a=" << a << " x=" << x;
    }
  }
}

TEST(UpperIncompleteGammaTest, RecurrenceConsistency) {
  for (double a : {-0.95, -0.7, -0.5, -0.2, -0.01}) {
    for (double x : log_grid(1e-4, 30.0, 30)) {
      const double lhs = a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
      EXPECT_LE(oracle::relative_error(lhs, upper_incomplete_gamma(a + 1.0, x)), 1e-10)
          << "a=" << a << " x=" << x;
    }
  }
}

TEST(UpperIncompleteGammaTest, LogFormAgreesAndExtendsRange) {
  EXPECT_NEAR(log_upper_incomplete_gamma(0.5, 0.0), std::log(0.27880558528066198), 1e-14);
  EXPECT_NEAR(log_upper_incomplete_gamma(0.0, std::log(10.0)),
              std::log(4.1569689296853243e-6), 1e-13);
  // Γ(-0.5, e^600) underflows a double; its log does not.
  const double big = log_upper_incomplete_gamma(-0.5, 600.0);
  EXPECT_TRUE(std::isfinite(big));
  EXPECT_NEAR(big / -std::exp(600.0), 1.0, 1e-12);
  // ln Γ(-0.5, x) ~ ln(2) + 0.5·|ln x| as x → 0.
  EXPECT_NEAR(log_upper_incomplete_gamma(-0.5, -700.0), std::log(2.0) + 350.0, 1e-9);
}

TEST(UpperIncompleteGammaTest, RejectsInvalid) {
  EXPECT_THROW(upper_incomplete_gamma(0.5, 0.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(0.5, -1.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(0.0, 1.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(-1.0, 1.0), DomainError);
  EXPECT_THROW(upper_incomplete_gamma(-1.5, 1.0), DomainError);
  Precision bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(upper_incomplete_gamma(0.5, 1.0, bad), DomainError);
}

TEST(PrecisionTest, Validation) {
  EXPECT_NO_THROW(Precision{}.validate());
  EXPECT_THROW((Precision{1e-12, -1.0, 10}).validate(), DomainError);
  EXPECT_THROW((Precision{1e-12, 0.0, 0}).validate(), DomainError);
  EXPECT_THROW((Precision{-1.0, 0.0, 10}).validate(), DomainError);
}

TEST(ExpIntegralTest, Examples) {
  EXPECT_NEAR(exp_integral_e1(1.0), 0.21938393439552027, 1e-15);
  EXPECT_NEAR(exp_integral_e1(10.0) / 4.1569689296853243e-6, 1.0, 1e-13);
  EXPECT_NEAR(exp_integral_e1(1e-6), 13.238295893062491, 1e-12);
  EXPECT_NEAR(exp_integral_e1(30.0) / 3.0215520106888125e-15, 1.0, 1e-12);
  EXPECT_GT(exp_integral_e1(1.0), exp_integral_e1(2.0));
}

TEST(ExpIntegralTest, MatchesQuadratureAndDecreases) {
  double previous = INFINITY;
  for (double x : log_grid(1e-6, 30.0, 40)) {
    const double v = exp_integral_e1(x);
    EXPECT_LE(oracle::relative_error(v, oracle::e1(x)), 1e-8) << x;
    EXPECT_LT(v, previous);
    previous = v;
  }
}

TEST(ExpIntegralTest, RejectsNonPositive) {
  EXPECT_THROW(exp_integral_e1(0.0), DomainError);
  EXPECT_THROW(exp_integral_e1(-2.0), DomainError);
}

TEST(GammaSurvivalTest, Examples) {
  EXPECT_NEAR(gamma_survival(1.0, std::log(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(gamma_survival(0.5, 1.0), std::erfc(1.0), 1e-15);
  EXPECT_NEAR(gamma_survival(1e-3, 1.0) / 0.00021960835758555639, 1.0, 1e-9);
  EXPECT_NEAR(gamma_survival(1e-4, 1e-6) / 0.001322961926840904, 1.0, 1e-10);
  EXPECT_NEAR(gamma_survival(5.0, 30.0) / 3.624300952061488e-9, 1.0, 1e-12);
  EXPECT_EQ(gamma_survival(0.3, 0.0), 1.0);
}

TEST(GammaSurvivalTest, MatchesQuadratureAndDecreases) {
  for (double shape : {1e-4, 1e-3, 0.1, 0.5, 1.0, 5.0}) {
    double previous = 1.0;
    for (double x : log_grid(1e-6, 30.0, 25)) {
      const double q = gamma_survival(shape, x);
      EXPECT_LE(oracle::relative_error(q, oracle::gamma_survival(shape, x)), 1e-8)
          << "shape=" << shape << " x=" << x;
      if (previous < 1.0) EXPECT_LT(q, previous);
      EXPECT_LE(q, previous);
      previous = q;
    }
  }
}

TEST(GammaSurvivalTest, LogFormsAreComplementary) {
  for (double shape : {1e-3, 0.5, 3.0}) {
    for (double x : {1e-3, 0.5, 2.0, 8.0}) {
      const double lq = log_gamma_survival(shape, std::log(x));
      const double lp = log_gamma_cdf(shape, std::log(x));
      EXPECT_NEAR(std::exp(lq) + std::exp(lp), 1.0, 1e-13);
    }
  }
}

TEST(GammaSurvivalTest, RejectsInvalid) {
  EXPECT_THROW(gamma_survival(0.0, 1.0), DomainError);
  EXPECT_THROW(gamma_survival(1.0, -1.0), DomainError);
}

TEST(GammaQuantileTest, Examples) {
  EXPECT_NEAR(gamma_quantile_upper(1.0, 0.5), -0.36651292058166433, 1e-12);
  EXPECT_NEAR(gamma_quantile_upper(0.5, std::erfc(1.0)), 0.0, 1e-12);
  const double lx = gamma_quantile_upper(0.01, 0.5);
  EXPECT_NEAR(lx, -69.883748850601495, 1e-9);
  EXPECT_NEAR(log_gamma_survival(0.01, lx), std::log(0.5), 1e-10);
}

TEST(GammaQuantileTest, RoundTripGrid) {
  for (double shape : {1e-3, 0.1, 0.5, 1.0, 5.0}) {
    for (int i = 1; i <= 49; ++i) {
      const double y = 0.01 + 0.98 * i / 50.0;
      const double x = std::exp(gamma_quantile_upper(shape, y));
      if (x == 0.0 || !std::isfinite(x)) continue;
      EXPECT_NEAR(gamma_survival(shape, x), y, 1e-9) << "shape=" << shape << " y=" << y;
    }
  }
}

TEST(GammaQuantileTest, TinyShapeStaysInLogDomain) {
  // shape = 3 / 10^4: the quantile underflows a double but its log is finite.
  const double lx = gamma_quantile_upper(3e-4, 0.5);
  EXPECT_TRUE(std::isfinite(lx));
  EXPECT_LT(lx, -745.0);
  EXPECT_NEAR(log_gamma_survival(3e-4, lx), std::log(0.5), 1e-10);
}

TEST(GammaQuantileTest, RejectsInvalid) {
  EXPECT_THROW(gamma_quantile_upper(1.0, 0.0), DomainError);
  EXPECT_THROW(gamma_quantile_upper(1.0, 1.0), DomainError);
  EXPECT_THROW(gamma_quantile_upper(0.0, 0.5), DomainError);
}

}  // namespace
}  // namespace nbpm
