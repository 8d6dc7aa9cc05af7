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
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "nbpm/detail/roots.hpp"
#include "nbpm/error.hpp"

namespace nbpm {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
// Below this x the power series are used, above it the continued fraction.
constexpr double kSeriesLimit = 1.5;

// ln Γ(1 + a), accurate for small |a|.
double log_gamma_1p(double a) {
  if (std::fabs(a) < 0.5) return std::log1p(boost::math::tgamma1pm1(a));
  return boost::math::lgamma(1.0 + a);
}

// Σ_{n≥1} (-1)^{n+1} x^n / (n! (a + n)), the correction term shared by the
// small-shape representation of Γ(a, x) and the E₁ series.
double alternating_tail_series(double a, double x, int max_iter) {
  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n <= max_iter; ++n) {
    power *= -x / n;
    const double term = -power / (a + n);
    sum += term;
    if (std::fabs(term) <= kEps * std::fabs(sum)) return sum;
  }
  throw NumericError("alternating series for incomplete gamma did not converge",
                     sum);
}

// a·Γ(a, x) for 0 < a <= 1, x < kSeriesLimit, via
// a·Γ(a,x) = (Γ(1+a) - 1) - (x^a - 1) + a·x^a·S(a, x).
double scaled_small_shape_upper(double a, double log_x, int max_iter) {
  const double x = std::exp(log_x);
  const double xa = std::exp(a * log_x);
  const double head =
      boost::math::tgamma1pm1(a) - std::expm1(a * log_x);
  return head + a * xa * alternating_tail_series(a, x, max_iter);
}

// Σ_{n≥0} x^n / ((a+1)...(a+n)), so that P(a,x) = x^a e^{-x} / Γ(a+1) · S.
double lower_series(double a, double x, int max_iter) {
  double sum = 1.0;
  double term = 1.0;
  for (int n = 1; n <= max_iter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term <= kEps * sum) return sum;
  }
  throw NumericError("lower incomplete gamma series did not converge", sum);
}

double log_lower_regularized_series(double a, double log_x, int max_iter) {
  const double x = std::exp(log_x);
  return a * log_x - x - log_gamma_1p(a) +
         std::log(lower_series(a, x, max_iter));
}

// ln of the Lentz continued fraction h with Γ(a,x) = x^a e^{-x} h. Valid for
// any real a once x is moderately large.
double log_upper_continued_fraction(double a, double x, int max_iter) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= max_iter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) <= kEps) return std::log(h);
  }
  throw NumericError("incomplete gamma continued fraction did not converge",
                     std::log(h));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

void Precision::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("Precision.rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw DomainError("Precision.abs_tol must be >= 0");
  if (max_iter < 1) throw DomainError("Precision.max_iter must be >= 1");
}

double log_gamma(double a) {
  require_finite(a, "log_gamma argument");
  if (!(a > 0.0)) throw DomainError("log_gamma requires a > 0");
  return boost::math::lgamma(a);
}

double log_upper_incomplete_gamma(double a, double log_x,
                                  const Precision& prec) {
  prec.validate();
  require_finite(a, "incomplete gamma parameter");
  if (std::isnan(log_x) || log_x == -std::numeric_limits<double>::infinity()) {
    throw DomainError("incomplete gamma requires x > 0");
  }
  if (!(a > -1.0)) throw DomainError("incomplete gamma requires a > -1");
  const double x = std::exp(log_x);
  if (x == std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  const int iters = prec.max_iter;

  if (x >= kSeriesLimit && (a <= 0.0 || x >= a + 1.0)) {
    return a * log_x - x + log_upper_continued_fraction(a, x, iters);
  }
  if (a == 0.0) {
    const double e1 =
        -kEulerGamma - log_x + alternating_tail_series(0.0, x, iters);
    return std::log(e1);
  }
  if (a < 0.0) {
    // Γ(a,x) = (x^a e^{-x} - Γ(a+1,x)) / (-a); the ratio below stays < 1.
    const double b = a + 1.0;
    const double upper_b = scaled_small_shape_upper(b, log_x, iters) / b;
    const double ratio = upper_b * std::exp(-a * log_x + x);
    return a * log_x - x + std::log1p(-ratio) - std::log(-a);
  }
  if (a <= 1.0 && x < kSeriesLimit) {
    return std::log(scaled_small_shape_upper(a, log_x, iters)) - std::log(a);
  }
  const double log_p = log_lower_regularized_series(a, log_x, iters);
  return boost::math::lgamma(a) + std::log1p(-std::exp(log_p));
}

double upper_incomplete_gamma(double a, double x, const Precision& prec) {
  require_finite(x, "incomplete gamma argument");
  if (!(x > 0.0)) throw DomainError("incomplete gamma requires x > 0");
  if (a == 0.0) throw DomainError("incomplete gamma requires a != 0");
  return std::exp(log_upper_incomplete_gamma(a, std::log(x), prec));
}

double exp_integral_e1(double x) {
  require_finite(x, "E1 argument");
  if (!(x > 0.0)) throw DomainError("E1 requires x > 0");
  return std::exp(log_upper_incomplete_gamma(0.0, std::log(x)));
}

double log_gamma_survival(double shape, double log_x) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma survival requires a finite shape > 0");
  }
  if (std::isnan(log_x)) throw DomainError("gamma survival argument is NaN");
  if (log_x == -std::numeric_limits<double>::infinity()) return 0.0;
  const double x = std::exp(log_x);
  if (x == std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  const int iters = Precision{}.max_iter;
  if (shape <= 1.0 && x < kSeriesLimit) {
    return std::log(scaled_small_shape_upper(shape, log_x, iters)) -
           log_gamma_1p(shape);
  }
  if (x < shape + 1.0) {
    return std::log1p(-std::exp(log_lower_regularized_series(shape, log_x, iters)));
  }
  return shape * log_x - x + log_upper_continued_fraction(shape, x, iters) -
         boost::math::lgamma(shape);
}

double log_gamma_cdf(double shape, double log_x) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma cdf requires a finite shape > 0");
  }
  if (std::isnan(log_x)) throw DomainError("gamma cdf argument is NaN");
  if (log_x == -std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  const double x = std::exp(log_x);
  if (x < std::fmax(shape + 1.0, kSeriesLimit)) {
    return log_lower_regularized_series(shape, log_x, Precision{}.max_iter);
  }
  return std::log1p(-std::exp(log_gamma_survival(shape, log_x)));
}

double gamma_survival(double shape, double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("gamma survival requires x >= 0");
  if (x == 0.0) {
    if (!(shape > 0.0)) throw DomainError("gamma survival requires shape > 0");
    return 1.0;
  }
  return std::exp(log_gamma_survival(shape, std::log(x)));
}

double gamma_quantile_upper(double shape, double y, const Precision& prec) {
  prec.validate();
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma quantile requires a finite shape > 0");
  }
  if (!(y > 0.0 && y < 1.0)) throw DomainError("gamma quantile requires 0 < y < 1");

  const double log_gamma_shape = boost::math::lgamma(shape);
  // Solve on whichever of ln Q or ln P is far from zero. Both residuals are
  // decreasing in u = ln x.
  const bool use_upper = y < 0.5;
  const double target = use_upper ? std::log(y) : std::log1p(-y);
  auto residual = [&](double u) {
    return use_upper ? log_gamma_survival(shape, u) - target
                     : target - log_gamma_cdf(shape, u);
  };
  auto residual_and_slope = [&](double u) {
    const double x = std::exp(u);
    const double log_density_term = shape * u - x - log_gamma_shape;
    if (use_upper) {
      const double log_q = log_gamma_survival(shape, u);
      return std::pair{log_q - target, -std::exp(log_density_term - log_q)};
    }
    const double log_p = log_gamma_cdf(shape, u);
    return std::pair{target - log_p, -std::exp(log_density_term - log_p)};
  };

  // Small-x leading term P ≈ x^shape / Γ(1 + shape).
  const double seed = (std::log1p(-y) + log_gamma_1p(shape)) / shape;
  const detail::Bracket bracket = detail::expand_bracket_decreasing(
      residual, seed, std::log(4.0), prec.max_iter);
  return detail::safeguarded_newton_decreasing(
      residual_and_slope, bracket, seed, prec.rel_tol, 4.0 * kEps,
      prec.max_iter);
}

}  // namespace nbpm
