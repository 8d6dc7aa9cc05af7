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

#include <cmath>
#include <exception>
#include <functional>
#include <string>

#include <json.hpp>

#include "cli.hpp"
#include "nbpm/experiments.hpp"
#include "nbpm/io.hpp"
#include "nbpm/levy_tail.hpp"
#include "nbpm/random_measures.hpp"
#include "nbpm/special_functions.hpp"

namespace nbpm::cli {
namespace {

bool close(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::fabs(b);
}

bool valid_weights(const DiscreteMeasure& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sum += m.weights()[i];
    if (!(m.weights()[i] > 0.0)) return false;
    if (m.sorted_by_weight() && i > 0 && !(m.weights()[i] < m.weights()[i - 1])) return false;
  }
  return std::fabs(sum - 1.0) <= 1e-12;
}

}  // namespace

std::vector<SelftestOutcome> run_selftests(unsigned jobs) {
  std::vector<SelftestOutcome> out;
  auto check = [&](std::string name, const std::function<bool(std::string&)>& body) {
    SelftestOutcome o{std::move(name), false, ""};
    try {
      o.passed = body(o.detail);
    } catch (const std::exception& e) {
      o.detail = e.what();
    }
    out.push_back(std::move(o));
  };
  const BaseMeasure uniform = BaseMeasure::uniform01();
  const TruncationPolicy trunc = TruncationPolicy::fixed(300);

  check("special_function_values", [](std::string&) {
    return close(exp_integral_e1(1.0), 0.21938393439552027, 1e-12) &&
           close(upper_incomplete_gamma(0.5, 1.0), 0.27880558528066198, 1e-12) &&
           close(upper_incomplete_gamma(-0.5, 1.0), 0.17814771178156069, 1e-12) &&
           close(gamma_survival(5.0, 30.0), 3.624300952061488e-9, 1e-12);
  });

  check("tail_inverse_roundtrip", [](std::string& detail) {
    for (const LevyTail& tail : {LevyTail::stable(0.5), LevyTail::gamma(3.0),
                                 LevyTail::generalized_gamma(0.1),
                                 LevyTail::generalized_gamma(0.9)}) {
      for (double y : {1e-6, 0.01, 1.0, 10.0, 1e3}) {
        const double x = tail_inverse(tail, y);
        if (!close(tail_value(tail, x), y, 1e-9)) {
          detail = std::string(to_string(tail.kind())) + " at y=" + io::format_double(y);
          return false;
        }
      }
    }
    return true;
  });

  check("normalization_and_order", [&](std::string& detail) {
    for (ProcessKind p : {ProcessKind::dirichlet, ProcessKind::extended_dp, ProcessKind::pkp,
                          ProcessKind::pdp_series, ProcessKind::pdp_stick,
                          ProcessKind::stable}) {
      ProcessParams params;
      params.alpha = 0.5;
      params.theta = 2.0;
      params.r = 3.0;
      params.sticks = 300;
      if (!valid_weights(build_measure(p, params, trunc, uniform, 11))) {
        detail = std::string(to_string(p));
        return false;
      }
    }
    return true;
  });

  check("dirichlet_is_pkp_r0", [&](std::string&) {
    return sample_pkp(0.0, LevyTail::gamma(3.0), uniform, trunc, 5).weights() ==
           sample_dp(3.0, uniform, trunc, 5).weights();
  });

  check("weights_independent_of_atoms", [&](std::string&) {
    BaseMeasure shifted = uniform;
    shifted.sampler = [](Xoshiro256ss& rng) { return 10.0 + rng.uniform(); };
    const LevyTail tail = LevyTail::generalized_gamma(0.5);
    return sample_pkp(4.0, tail, uniform, trunc, 9).weights() ==
           sample_pkp(4.0, tail, shifted, trunc, 9).weights();
  });

  check("kolmogorov_distance_examples", [&](std::string&) {
    Provenance prov;
    const DiscreteMeasure point({0.5}, {1.0}, false, prov);
    const DiscreteMeasure pair({0.25, 0.75}, {0.5, 0.5}, false, prov);
    return kolmogorov_distance(point, uniform) == 0.5 &&
           kolmogorov_distance(pair, uniform) == 0.25;
  });

  check("experiment_independent_of_jobs", [&](std::string&) {
    ExperimentSpec spec;
    spec.params.alpha = 0.5;
    spec.params.theta = 10.0;
    spec.replications = 40;
    spec.parallelism = 1;
    const double serial = run_ks_experiment(spec, uniform).mean_distance;
    spec.parallelism = jobs > 1 ? jobs : 4;
    return run_ks_experiment(spec, uniform).mean_distance == serial;
  });

  check("measure_io_roundtrip", [&](std::string&) {
    const DiscreteMeasure m = sample_dp(3.0, uniform, trunc, 21);
    const std::string json = io::measure_to_json(m);
    const std::string csv = io::measure_to_csv(m);
    return io::measure_to_json(io::measure_from_json(json)) == json &&
           io::measure_to_csv(io::measure_from_csv(csv)) == csv;
  });

  check("bundled_table2_config", [](std::string& detail) {
    const auto cfg = nlohmann::json::parse(bundled_table2_config());
    const auto& rows = cfg.at("rows");
    detail = std::to_string(rows.size()) + " rows";
    return rows.size() == 9 && rows.at(2).at("r").get<double>() == 300.0;
  });

  return out;
}

}  // namespace nbpm::cli
