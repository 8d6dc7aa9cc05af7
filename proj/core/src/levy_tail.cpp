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

#include "nbpm/levy_tail.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nbpm/detail/roots.hpp"
#include "nbpm/error.hpp"

namespace nbpm {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void require_unit_interval(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("tail index alpha must lie in (0, 1)");
  }
}

// Initial guess for ln L^{-1}(e^v), from the small- and large-x asymptotes.
double inverse_seed(const LevyTail& tail, double log_y) {
  switch (tail.kind()) {
    case TailKind::stable:
      return -log_y / tail.alpha();
    case TailKind::gamma: {
      // θ E₁(x) ≈ θ(-γ - ln x) near 0 and ≈ θ e^{-x}/x for large x.
      const double t = std::exp(log_y) / tail.theta();
      if (t >= 0.2) return -t - kEulerGamma;
      return std::log(-std::log(t));
    }
    case TailKind::generalized_gamma: {
      const double a = tail.alpha();
      const double log_g = std::log(a) - tail.log_scale();  // ln Γ(1-α)
      // Stable closed form with the same y: L(x) ≈ x^{-α} / Γ(1-α).
      const double small = -(log_y + log_g) / a;
      if (small <= 0.0) return small;
      const double large = -(log_y + log_g - std::log(a));
      return std::log(std::fmax(large, 1.0));
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(TailKind kind) {
  switch (kind) {
    case TailKind::stable:
      return "stable";
    case TailKind::gamma:
      return "gamma";
    case TailKind::generalized_gamma:
      return "generalized_gamma";
  }
  return "unknown";
}

TailKind tail_kind_from_string(std::string_view name) {
  if (name == "stable") return TailKind::stable;
  if (name == "gamma") return TailKind::gamma;
  if (name == "generalized_gamma") return TailKind::generalized_gamma;
  throw DomainError("unknown tail kind '" + std::string(name) + "'");
}

LevyTail::LevyTail(TailKind kind, double param, Precision prec)
    : kind_(kind), param_(param), prec_(prec), log_scale_(0.0) {
  prec_.validate();
  switch (kind_) {
    case TailKind::stable:
      require_unit_interval(param_);
      break;
    case TailKind::gamma:
      if (!(param_ > 0.0) || !std::isfinite(param_)) {
        throw DomainError("gamma tail requires theta > 0");
      }
      log_scale_ = std::log(param_);
      break;
    case TailKind::generalized_gamma:
      require_unit_interval(param_);
      log_scale_ = std::log(param_) - log_gamma(1.0 - param_);
      break;
  }
}

LevyTail LevyTail::stable(double alpha, Precision prec) {
  return LevyTail(TailKind::stable, alpha, prec);
}
LevyTail LevyTail::gamma(double theta, Precision prec) {
  return LevyTail(TailKind::gamma, theta, prec);
}
LevyTail LevyTail::generalized_gamma(double alpha, Precision prec) {
  return LevyTail(TailKind::generalized_gamma, alpha, prec);
}

double LevyTail::alpha() const {
  if (kind_ == TailKind::gamma) throw DomainError("gamma tail has no alpha");
  return param_;
}

double LevyTail::theta() const {
  if (kind_ != TailKind::gamma) throw DomainError("only the gamma tail has theta");
  return param_;
}

double log_tail_value(const LevyTail& tail, double log_x) {
  if (std::isnan(log_x)) throw DomainError("tail argument is NaN");
  switch (tail.kind()) {
    case TailKind::stable:
      return -tail.alpha() * log_x;
    case TailKind::gamma:
      return tail.log_scale() +
             log_upper_incomplete_gamma(0.0, log_x, tail.precision());
    case TailKind::generalized_gamma:
      return tail.log_scale() + log_upper_incomplete_gamma(
                                    -tail.alpha(), log_x, tail.precision());
  }
  return 0.0;
}

double log_tail_slope(const LevyTail& tail, double log_x) {
  const double x = std::exp(log_x);
  switch (tail.kind()) {
    case TailKind::stable:
      return -tail.alpha();
    case TailKind::gamma:
      // -x ν(x) / L(x) with ν(x) = θ x^{-1} e^{-x}.
      return -std::exp(-x - log_upper_incomplete_gamma(0.0, log_x,
                                                       tail.precision()));
    case TailKind::generalized_gamma: {
      const double a = tail.alpha();
      return -std::exp(-a * log_x - x -
                       log_upper_incomplete_gamma(-a, log_x, tail.precision()));
    }
  }
  return 0.0;
}

double tail_value(const LevyTail& tail, double x) {
  if (!(x > 0.0) || std::isnan(x)) throw DomainError("tail_value requires x > 0");
  return std::exp(log_tail_value(tail, std::log(x)));
}

double log_tail_inverse_numeric(const LevyTail& tail, double log_y,
                                std::optional<double> hint) {
  if (!std::isfinite(log_y)) throw DomainError("tail_inverse requires finite y > 0");
  const Precision& prec = tail.precision();
  const double seed = hint.value_or(inverse_seed(tail, log_y));
  auto residual = [&](double u) { return log_tail_value(tail, u) - log_y; };
  auto residual_and_slope = [&](double u) {
    return std::pair{log_tail_value(tail, u) - log_y, log_tail_slope(tail, u)};
  };
  // Geometric expansion by factors of 4 in x.
  const detail::Bracket bracket = detail::expand_bracket_decreasing(
      residual, seed, std::log(4.0), prec.max_iter);
  return detail::safeguarded_newton_decreasing(
      residual_and_slope, bracket, seed, prec.rel_tol,
      4.0 * std::numeric_limits<double>::epsilon(), prec.max_iter);
}

double log_tail_inverse(const LevyTail& tail, double log_y,
                        std::optional<double> hint) {
  if (tail.kind() == TailKind::stable) {
    if (!std::isfinite(log_y)) throw DomainError("tail_inverse requires finite y > 0");
    return -log_y / tail.alpha();
  }
  return log_tail_inverse_numeric(tail, log_y, hint);
}

double tail_inverse(const LevyTail& tail, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError("tail_inverse requires finite y > 0");
  }
  return std::exp(log_tail_inverse(tail, std::log(y)));
}

double tail_support_bound(const LevyTail& tail) { return tail_inverse(tail, 1.0); }

}  // namespace nbpm
