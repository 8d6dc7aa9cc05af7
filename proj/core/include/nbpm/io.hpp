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

#ifndef NBPM_IO_HPP_
#define NBPM_IO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nbpm/experiments.hpp"
#include "nbpm/levy_tail.hpp"
#include "nbpm/point_processes.hpp"
#include "nbpm/random_measures.hpp"

namespace nbpm::io {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);
// Strict parse of a full token; DomainError otherwise.
double parse_double(std::string_view text);
std::uint64_t parse_uint64(std::string_view text);

// Single-line JSON.
std::string tail_to_json(const LevyTail& tail);
LevyTail tail_from_json(std::string_view text);

std::string truncation_to_json(const TruncationPolicy& policy);
TruncationPolicy truncation_from_json(std::string_view text);

// {"schema_version", "atoms", "weights", "sorted_by_weight", "provenance"}.
std::string measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(std::string_view text);

// "# key=value" provenance lines, then an "atom,weight" header and one row
// per atom.
std::string measure_to_csv(const DiscreteMeasure& m);
DiscreteMeasure measure_from_csv(std::string_view text);

// Config format for run_ks_experiment:
//   {"process": "pdp_series",
//    "params": {"alpha": 0.5, "theta": 10, "r": 20, "tail": "gamma",
//               "sticks": 2000, "ranked": true},
//    "replications": 500,
//    "truncation": {"mode": "fixed", "n": 400, "hard_cap": 1000000},
//    "master_seed": 42, "parallelism": 1}
// Missing keys keep their defaults. Unknown keys are rejected.
// The parallelism hint is left out when include_parallelism is false, so that
// echoes do not depend on the worker count.
std::string experiment_spec_to_json(const ExperimentSpec& spec,
                                    bool include_parallelism = true);
ExperimentSpec experiment_spec_from_json(std::string_view text);

using Cell = std::variant<std::int64_t, double, std::string>;

/// A rectangular result table with free-form string metadata. Integral
/// cells stay integral through both formats.
struct Table {
  std::string kind;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Index of a column; DomainError if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;

  friend bool operator==(const Table&, const Table&) = default;
};

// {"schema_version", "kind", "metadata", "columns", "rows"}.
std::string table_to_json(const Table& table);
Table table_from_json(std::string_view text);

// "# schema_version=1", "# kind=...", "# key=value" metadata, then the
// header and rows. String cells are quoted when they contain a comma or quote.
std::string table_to_csv(const Table& table);
Table table_from_csv(std::string_view text);

// One row per point: index (1-based), value.
Table points_table(const PointSequence& points);

}  // namespace nbpm::io

#endif  // NBPM_IO_HPP_
