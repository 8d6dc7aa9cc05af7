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

#ifndef NBPM_SPECIAL_FUNCTIONS_HPP_
#define NBPM_SPECIAL_FUNCTIONS_HPP_

namespace nbpm {

// Tolerances for the iterative numerical routines. Series and continued
// fractions always run to machine precision; `rel_tol` is the stopping rule
// for root finding and `max_iter` caps every loop.
struct Precision {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_iter = 500;

  // Throws DomainError unless rel_tol > 0, abs_tol >= 0 and max_iter >= 1.
  void validate() const;

  friend bool operator==(const Precision&, const Precision&) = default;
};

// ln Γ(a) for a > 0.
double log_gamma(double a);

// Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt for a ∈ (-1, 0) ∪ (0, ∞) and x > 0.
double upper_incomplete_gamma(double a, double x, const Precision& prec = {});

// ln Γ(a, x) evaluated from ln x. Also accepts a == 0 (then it is ln E₁(x)).
// Works where Γ(a, x) itself would overflow or underflow, which the Lévy
// tails rely on for very small and very large jump sizes.
double log_upper_incomplete_gamma(double a, double log_x,
                                  const Precision& prec = {});

// E₁(x) = ∫_x^∞ t^{-1} e^{-t} dt, x > 0.
double exp_integral_e1(double x);

// Regularized upper incomplete gamma Q(shape, x) = Γ(shape, x) / Γ(shape),
// i.e. Pr(W > x) for W ~ Gamma(shape, 1). Q(shape, 0) = 1.
double gamma_survival(double shape, double x);

// ln Q(shape, e^log_x) and ln P(shape, e^log_x) with P = 1 - Q, each
// computed on the branch where it has full relative accuracy.
double log_gamma_survival(double shape, double log_x);
double log_gamma_cdf(double shape, double log_x);

// ln x for the unique x with Q(shape, x) = y, 0 < y < 1. The result stays
// finite for shapes so small that x itself underflows.
double gamma_quantile_upper(double shape, double y, const Precision& prec = {});

}  // namespace nbpm

#endif  // NBPM_SPECIAL_FUNCTIONS_HPP_
