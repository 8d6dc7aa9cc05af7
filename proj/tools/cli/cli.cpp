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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbpm/error.hpp"
#include "nbpm/experiments.hpp"
#include "nbpm/io.hpp"
#include "nbpm/levy_tail.hpp"
#include "nbpm/random_measures.hpp"

namespace nbpm::cli {
namespace {

using Json = nlohmann::json;

struct Flags {
  std::optional<std::string> process;
  std::optional<double> alpha;
  std::optional<double> theta;
  std::vector<double> r;
  std::vector<std::size_t> n;
  std::optional<double> epsilon;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> output;
  std::optional<std::string> config;
  std::optional<std::string> tail;
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> atoms;
  std::optional<std::string> normalizer;
};

// Flag values win over config values, which win over defaults.
class Settings {
 public:
  Settings(const Flags& flags, Json config) : flags_(flags), config_(std::move(config)) {}

  const Flags& flags() const { return flags_; }
  const Json& config() const { return config_; }

  template <class T>
  std::optional<T> get(const std::optional<T>& flag, const char* key) const {
    if (flag) return flag;
    if (!config_.contains(key) || config_[key].is_null()) return std::nullopt;
    try {
      return config_[key].get<T>();
    } catch (const Json::exception&) {
      throw DomainError(std::string("config: bad value for '") + key + "'");
    }
  }

  template <class T>
  std::vector<T> list(const std::vector<T>& flag, const char* key) const {
    if (!flag.empty()) return flag;
    if (!config_.contains(key)) return {};
    const Json& v = config_[key];
    try {
      if (v.is_array()) return v.get<std::vector<T>>();
      return {v.get<T>()};
    } catch (const Json::exception&) {
      throw DomainError(std::string("config: bad value for '") + key + "'");
    }
  }

 private:
  const Flags& flags_;
  Json config_;
};

Json read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void check_config_keys(const Json& cfg, std::initializer_list<const char*> known) {
  if (cfg.is_null()) return;
  if (!cfg.is_object()) throw DomainError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "schema_version") {
      if (value != io::kSchemaVersion) throw DomainError("config: unsupported schema_version");
      continue;
    }
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
}

std::string output_format(const Settings& s) {
  const std::string fmt = s.get(s.flags().output, "output").value_or("json");
  if (fmt != "json" && fmt != "csv") throw DomainError("--output must be csv or json");
  return fmt;
}

TruncationPolicy truncation_from(const Settings& s, std::size_t default_n) {
  if (auto eps = s.get(s.flags().epsilon, "epsilon")) {
    return TruncationPolicy::relative(*eps);
  }
  const auto n = s.list(s.flags().n, "n");
  if (n.size() > 1) throw DomainError("--n takes a single value here");
  return TruncationPolicy::fixed(n.empty() ? default_n : n.front());
}

std::optional<double> single_r(const Settings& s) {
  const auto r = s.list(s.flags().r, "r");
  if (r.size() > 1) throw DomainError("--r takes a single value here");
  if (r.empty()) return std::nullopt;
  return r.front();
}

std::string emit_table(const io::Table& t, const std::string& fmt) {
  return fmt == "csv" ? io::table_to_csv(t) : io::table_to_json(t);
}

std::string cmd_sample(const Settings& s) {
  const ProcessKind process =
      process_kind_from_string(s.get(s.flags().process, "process").value_or("dirichlet"));
  ProcessParams params;
  params.alpha = s.get(s.flags().alpha, "alpha");
  params.theta = s.get(s.flags().theta, "theta");
  params.r = single_r(s);
  if (auto tail = s.get(s.flags().tail, "tail")) params.tail = tail_kind_from_string(*tail);
  params.sticks = s.get(s.flags().atoms, "atoms").value_or(params.sticks);
  const TruncationPolicy trunc = truncation_from(s, 400);
  const std::uint64_t seed = s.get(s.flags().seed, "seed").value_or(42);
  const DiscreteMeasure m =
      build_measure(process, params, trunc, BaseMeasure::uniform01(), seed);
  return output_format(s) == "csv" ? io::measure_to_csv(m) : io::measure_to_json(m);
}

struct KsRow {
  double alpha = 0.0;
  double theta = 0.0;
  std::optional<double> r;
  std::optional<double> reference;
};

std::vector<KsRow> ks_rows(const Settings& s) {
  const Flags& f = s.flags();
  if (f.alpha || f.theta || !f.r.empty()) {
    if (!f.alpha || !f.theta) throw DomainError("ks-table rows from flags need --alpha and --theta");
    KsRow row{*f.alpha, *f.theta, std::nullopt, std::nullopt};
    if (!f.r.empty()) {
      if (f.r.size() > 1) throw DomainError("--r takes a single value here");
      row.r = f.r.front();
    }
    return {row};
  }
  const Json& cfg = s.config();
  if (!cfg.contains("rows") || !cfg["rows"].is_array() || cfg["rows"].empty()) {
    throw DomainError("ks-table config needs a non-empty 'rows' array");
  }
  std::vector<KsRow> rows;
  for (const Json& r : cfg["rows"]) {
    if (!r.is_object()) throw DomainError("ks-table rows must be objects");
    for (const auto& [key, value] : r.items()) {
      if (key != "alpha" && key != "theta" && key != "r" && key != "reference") {
        throw DomainError("ks-table row: unknown key '" + key + "'");
      }
      if (!value.is_number()) throw DomainError("ks-table row: '" + key + "' must be a number");
    }
    if (!r.contains("alpha") || !r.contains("theta")) {
      throw DomainError("ks-table row needs alpha and theta");
    }
    KsRow row{r["alpha"].get<double>(), r["theta"].get<double>(), std::nullopt, std::nullopt};
    if (r.contains("r")) row.r = r["r"].get<double>();
    if (r.contains("reference")) row.reference = r["reference"].get<double>();
    rows.push_back(row);
  }
  return rows;
}

// Returns the rendered table; sets `failed` when any replication failed.
std::string cmd_ks_table(const Settings& s, std::ostream& err, bool& failed) {
  const ProcessKind process =
      process_kind_from_string(s.get(s.flags().process, "process").value_or("pdp_series"));
  const TruncationPolicy trunc = truncation_from(s, 400);
  const std::size_t reps = s.get(s.flags().reps, "reps").value_or(500);
  const std::uint64_t seed = s.get(s.flags().seed, "seed").value_or(42);
  const unsigned jobs = s.get(s.flags().jobs, "jobs").value_or(1);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  io::Table t;
  t.kind = "ks_table";
  t.columns = {"process",      "alpha",     "theta",     "r",        "replications",
               "failed",       "mean_distance", "std_error", "reference", "abs_diff"};
  t.metadata["master_seed"] = std::to_string(seed);
  t.metadata["truncation"] = io::truncation_to_json(trunc);
  t.metadata["base"] = BaseMeasure::uniform01().label;

  const auto rows = ks_rows(s);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const KsRow& row = rows[i];
    ExperimentSpec spec;
    spec.process = process;
    spec.params.alpha = row.alpha;
    spec.params.theta = row.theta;
    spec.params.r = row.r;
    spec.replications = reps;
    spec.truncation = trunc;
    spec.master_seed = seed;
    spec.parallelism = jobs;
    const ExperimentResult res = run_ks_experiment(spec, BaseMeasure::uniform01());
    err << "row " << i + 1 << ": " << res.wall_time << " s\n";
    if (res.flagged()) {
      failed = true;
      err << "row " << i + 1 << ": " << res.failed_replications
          << " replications failed, first: " << res.first_failure << "\n";
    }
    const double ref = row.reference.value_or(nan);
    t.rows.push_back({std::string(to_string(process)), row.alpha, row.theta,
                      row.r.value_or(nan), static_cast<std::int64_t>(res.replications),
                      static_cast<std::int64_t>(res.failed_replications), res.mean_distance,
                      res.std_error, ref, std::fabs(res.mean_distance - ref)});
    t.metadata["spec_echo." + std::to_string(i + 1)] =
        io::experiment_spec_to_json(spec, false);
  }
  return emit_table(t, output_format(s));
}

std::string cmd_weights(const Settings& s, unsigned jobs) {
  const TailKind kind = tail_kind_from_string(s.get(s.flags().tail, "tail").value_or("gamma"));
  LevyTail tail = LevyTail::gamma(1.0);
  if (kind == TailKind::gamma) {
    tail = LevyTail::gamma(s.get(s.flags().theta, "theta").value_or(3.0));
  } else {
    const auto alpha = s.get(s.flags().alpha, "alpha");
    if (!alpha) throw DomainError("weights with this tail needs --alpha");
    tail = kind == TailKind::stable ? LevyTail::stable(*alpha)
                                    : LevyTail::generalized_gamma(*alpha);
  }
  std::vector<double> r_grid = s.list(s.flags().r, "r");
  if (r_grid.empty()) r_grid = {0.0, 3.0, 5.0, 10.0};
  const std::size_t top_k = s.get(s.flags().top_k, "top_k").value_or(10);
  const std::size_t reps = s.get(s.flags().reps, "reps").value_or(1000);
  const auto n = s.list(s.flags().n, "n");
  if (n.size() > 1) throw DomainError("--n takes a single value here");
  const std::size_t points = n.empty() ? 2000 : n.front();
  const std::uint64_t seed = s.get(s.flags().seed, "seed").value_or(42);

  const WeightProfile wp = weight_profile(tail, r_grid, top_k, reps, seed, points, jobs);
  io::Table t;
  t.kind = "weight_profile";
  t.columns = {"r", "rank", "mean_weight"};
  t.metadata["tail"] = io::tail_to_json(tail);
  t.metadata["replications"] = std::to_string(reps);
  t.metadata["points"] = std::to_string(points);
  t.metadata["seed"] = std::to_string(seed);
  for (std::size_t i = 0; i < wp.r_grid.size(); ++i) {
    for (std::size_t k = 0; k < wp.top_k; ++k) {
      t.rows.push_back({wp.r_grid[i], static_cast<std::int64_t>(k + 1), wp.mean_weights[i][k]});
    }
  }
  return emit_table(t, output_format(s));
}

std::string cmd_clusters(const Settings& s, unsigned jobs) {
  GrowthSpec spec;
  spec.process =
      process_kind_from_string(s.get(s.flags().process, "process").value_or("dirichlet"));
  spec.params.alpha = s.get(s.flags().alpha, "alpha");
  spec.params.theta = s.get(s.flags().theta, "theta");
  if (spec.process == ProcessKind::dirichlet && !spec.params.theta) spec.params.theta = 3.0;
  spec.params.r = single_r(s);
  if (auto tail = s.get(s.flags().tail, "tail")) spec.params.tail = tail_kind_from_string(*tail);
  const std::size_t atoms = s.get(s.flags().atoms, "atoms").value_or(2000);
  spec.params.sticks = atoms;
  if (auto eps = s.get(s.flags().epsilon, "epsilon")) {
    spec.truncation = TruncationPolicy::relative(*eps);
  } else {
    spec.truncation = TruncationPolicy::fixed(atoms);
  }
  const std::string normalizer = s.get(s.flags().normalizer, "normalizer")
                                     .value_or(spec.params.alpha ? "n_pow_alpha" : "log_n");
  if (normalizer == "log_n") {
    spec.normalizer = GrowthNormalizer::log_n;
  } else if (normalizer == "n_pow_alpha") {
    spec.normalizer = GrowthNormalizer::n_pow_alpha;
  } else {
    throw DomainError("--normalizer must be log_n or n_pow_alpha");
  }
  std::vector<std::size_t> n_grid = s.list(s.flags().n, "n");
  if (n_grid.empty()) n_grid = {100, 1000};
  const std::size_t reps = s.get(s.flags().reps, "reps").value_or(200);
  const std::uint64_t seed = s.get(s.flags().seed, "seed").value_or(42);

  const GrowthDiagnostic g = clustering_growth(spec, n_grid, reps, seed, jobs);
  io::Table t;
  t.kind = "growth";
  t.columns = {"n", "kn_mean", "kn_std_error", "ratio"};
  t.metadata["process"] = std::string(to_string(spec.process));
  t.metadata["normalizer"] = normalizer;
  t.metadata["replications"] = std::to_string(reps);
  t.metadata["seed"] = std::to_string(seed);
  t.metadata["truncation"] = io::truncation_to_json(spec.truncation);
  if (spec.params.alpha) t.metadata["alpha"] = io::format_double(*spec.params.alpha);
  if (spec.params.theta) t.metadata["theta"] = io::format_double(*spec.params.theta);
  if (spec.params.r) t.metadata["r"] = io::format_double(*spec.params.r);
  for (std::size_t i = 0; i < g.n_grid.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(g.n_grid[i]), g.kn_means[i],
                      g.kn_std_errors[i], g.ratios[i]});
  }
  return emit_table(t, output_format(s));
}

std::string cmd_selftest(const Settings& s, unsigned jobs, std::ostream& err, bool& failed) {
  io::Table t;
  t.kind = "selftest";
  t.columns = {"property", "status", "detail"};
  for (const SelftestOutcome& o : run_selftests(jobs)) {
    err << (o.passed ? "PASS " : "FAIL ") << o.name
        << (o.detail.empty() ? "" : ": " + o.detail) << "\n";
    failed = failed || !o.passed;
    t.rows.push_back({o.name, std::string(o.passed ? "pass" : "fail"), o.detail});
  }
  return emit_table(t, output_format(s));
}

void deliver(const std::string& subcommand, const std::string& fmt,
             const std::string& text, std::ostream& out, std::ostream& err) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir == nullptr || *dir == '\0') {
    out << text;
    return;
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = fs::path(dir) / (subcommand + "." + fmt);
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) {
    throw ResourceError("cannot write output file '" + path.string() + "'");
  }
  err << "wrote " << path.string() << "\n";
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--output", f.output, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--jobs", f.jobs, "Worker threads (results do not depend on it)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negative binomial process priors: sampling and Monte Carlo experiments",
               "nbpm"};
  app.require_subcommand(1);
  Flags f;

  auto* sample = app.add_subcommand("sample", "Draw one random measure");
  auto* ks = app.add_subcommand("ks-table", "Mean Kolmogorov distance per parameter row");
  auto* weights = app.add_subcommand("weights", "Mean largest weights across r");
  auto* clusters = app.add_subcommand("clusters", "Growth of the number of clusters K_n");
  auto* selftest = app.add_subcommand("selftest", "Run the invariant checks");
  for (auto* sub : {sample, ks, weights, clusters, selftest}) add_common(sub, f);
  for (auto* sub : {sample, ks, clusters}) {
    sub->add_option("--process", f.process,
                    "dirichlet|extended_dp|pkp|pdp_series|pdp_stick|stable");
  }
  for (auto* sub : {sample, ks, weights, clusters}) {
    sub->add_option("--alpha", f.alpha, "Stable index");
    sub->add_option("--theta", f.theta, "Concentration / gamma tail mass");
    sub->add_option("--r", f.r, "Negative binomial order (comma list for weights)")
        ->delimiter(',');
    sub->add_option("--n", f.n, "Truncation level (comma list of sample sizes for clusters)")
        ->delimiter(',');
    sub->add_option("--reps", f.reps, "Monte Carlo replications");
  }
  for (auto* sub : {sample, ks, clusters}) {
    sub->add_option("--epsilon", f.epsilon, "Relative-weight stopping rule");
  }
  for (auto* sub : {sample, weights, clusters}) {
    sub->add_option("--tail", f.tail, "stable|gamma|generalized_gamma");
  }
  for (auto* sub : {sample, clusters}) {
    sub->add_option("--atoms", f.atoms, "Stick count / atom truncation");
  }
  weights->add_option("--top-k", f.top_k, "Number of ranked weights");
  clusters->add_option("--normalizer", f.normalizer, "log_n or n_pow_alpha");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    Json cfg;
    const std::string name = app.get_subcommands().front()->get_name();
    if (f.config) {
      cfg = read_config_file(*f.config);
    } else if (name == "ks-table") {
      cfg = Json::parse(bundled_table2_config());
    }
    check_config_keys(cfg, {"process", "alpha", "theta", "r", "n", "epsilon", "reps", "seed",
                            "jobs", "output", "tail", "top_k", "atoms", "normalizer", "rows"});
    Settings s(f, std::move(cfg));
    const unsigned jobs = s.get(f.jobs, "jobs").value_or(1);
    const std::string fmt = output_format(s);

    bool failed = false;
    std::string text;
    if (name == "sample") {
      text = cmd_sample(s);
    } else if (name == "ks-table") {
      text = cmd_ks_table(s, err, failed);
    } else if (name == "weights") {
      text = cmd_weights(s, jobs);
    } else if (name == "clusters") {
      text = cmd_clusters(s, jobs);
    } else {
      text = cmd_selftest(s, jobs, err, failed);
    }
    deliver(name, fmt, text, out, err);
    if (failed) return name == "selftest" ? kExitSelftest : kExitNumeric;
    return kExitOk;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    // DomainError, DegenerateTruncationError, CapabilityError.
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace nbpm::cli
