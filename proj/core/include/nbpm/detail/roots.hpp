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

#ifndef NBPM_DETAIL_ROOTS_HPP_
#define NBPM_DETAIL_ROOTS_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nbpm/error.hpp"

namespace nbpm::detail {

struct Bracket {
  double lo;
  double hi;
};

// Widens [x0, x0] by `step` in the direction indicated by the sign of f until
// f changes sign. `f` must be decreasing. Returns lo < hi with f(lo) >= 0 >=
// f(hi). Steps are additive, so a multiplicative factor in x becomes an
// additive step when the caller works in log(x).
template <class F>
Bracket expand_bracket_decreasing(F&& f, double x0, double step,
                                  int max_steps) {
  double lo = x0;
  double hi = x0;
  const double f0 = f(x0);
  if (f0 == 0.0) return {x0, x0};
  if (f0 > 0.0) {
    for (int i = 0; i < max_steps; ++i) {
      hi += step;
      const double fh = f(hi);
      if (fh <= 0.0) return {hi - step, hi};
    }
  } else {
    for (int i = 0; i < max_steps; ++i) {
      lo -= step;
      const double fl = f(lo);
      if (fl >= 0.0) return {lo, lo + step};
    }
  }
  throw NumericError("root bracket expansion failed", x0);
}

// Newton iteration on a decreasing function, safeguarded by bisection so the
// iterate never leaves [lo, hi]. `fdf` returns {f(x), f'(x)}.
// Stops when |f| <= ftol or the bracket is narrower than xtol.
template <class FdF>
double safeguarded_newton_decreasing(FdF&& fdf, Bracket b, double x0,
                                     double ftol, double xtol, int max_iter) {
  double lo = b.lo;
  double hi = b.hi;
  if (lo == hi) return lo;
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [fx, dfx] = fdf(x);
    if (!std::isfinite(fx)) {
      throw NumericError("non-finite function value in Newton iteration", x);
    }
    if (std::fabs(fx) <= ftol) return x;
    if (fx > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= xtol * std::fmax(1.0, std::fabs(x))) return 0.5 * (lo + hi);
    double next = x - fx / dfx;
    if (!(dfx < 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw NumericError("Newton iteration did not converge", x);
}

}  // namespace nbpm::detail

#endif  // NBPM_DETAIL_ROOTS_HPP_
