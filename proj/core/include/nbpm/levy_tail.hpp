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

#ifndef NBPM_LEVY_TAIL_HPP_
#define NBPM_LEVY_TAIL_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "nbpm/special_functions.hpp"

namespace nbpm {

enum class TailKind { stable, gamma, generalized_gamma };

std::string_view to_string(TailKind kind);
// Throws DomainError for unknown names.
TailKind tail_kind_from_string(std::string_view name);

/// A Lévy tail L(x) = ν((x, ∞)): a strictly decreasing bijection of (0, ∞)
/// with L(0+) = ∞ and L(∞) = 0.
///
///   stable             L(x) = x^{-α},                    0 < α < 1
///   gamma              L(x) = θ E₁(x),                   θ > 0
///   generalized_gamma  L(x) = α / Γ(1-α) · Γ(-α, x),     0 < α < 1
///
/// Values are immutable; all member functions are safe to call concurrently.
class LevyTail {
 public:
  static LevyTail stable(double alpha, Precision prec = {});
  static LevyTail gamma(double theta, Precision prec = {});
  static LevyTail generalized_gamma(double alpha, Precision prec = {});

  TailKind kind() const { return kind_; }
  // Stable index for stable / generalized_gamma, total mass θ for gamma.
  double alpha() const;
  double theta() const;
  const Precision& precision() const { return prec_; }
  // ln θ (gamma) or ln(α / Γ(1-α)) (generalized_gamma); 0 for stable.
  double log_scale() const { return log_scale_; }

  friend bool operator==(const LevyTail&, const LevyTail&) = default;

 private:
  LevyTail(TailKind kind, double param, Precision prec);

  TailKind kind_;
  double param_;
  Precision prec_;
  double log_scale_;  // ln of the constant factor in front of the integral
};

// L(x), x > 0.
double tail_value(const LevyTail& tail, double x);
// ln L(e^u); finite even where L(x) would over- or underflow.
double log_tail_value(const LevyTail& tail, double log_x);
// d ln L / d ln x at x = e^u (always negative).
double log_tail_slope(const LevyTail& tail, double log_x);

// The unique x with L(x) = y, y > 0.
double tail_inverse(const LevyTail& tail, double y);
// ln L^{-1}(e^v). `hint` is an optional starting point for ln x, used when
// inverting a monotone sequence so that each solve starts at its neighbour.
double log_tail_inverse(const LevyTail& tail, double log_y,
                        std::optional<double> hint = std::nullopt);
// Same as log_tail_inverse but never uses the stable closed form.
double log_tail_inverse_numeric(const LevyTail& tail, double log_y,
                                std::optional<double> hint = std::nullopt);

// L^{-1}(1), the upper end of the support of the negative binomial process.
double tail_support_bound(const LevyTail& tail);

}  // namespace nbpm

#endif  // NBPM_LEVY_TAIL_HPP_
