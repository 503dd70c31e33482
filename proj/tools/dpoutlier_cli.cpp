//
// Copyright 2026 dpoutlier developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line harness for the dpoutlier shared library. Everything here
// goes through the C API in dpoutlier.h.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpoutlier.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitResource = 3;

struct CliError {
  int exit_code;
  std::string message;
};

void check(dpo_status status, const std::string& context) {
  if (status == DPO_OK) return;
  int code = kExitConfig;
  if (status == DPO_ERR_RESOURCE) code = kExitResource;
  if (status == DPO_ERR_VERIFY) code = kExitVerify;
  std::ostringstream msg;
  msg << context << ": " << dpo_status_name(status) << " ("
      << dpo_last_error() << ")";
  throw CliError{code, msg.str()};
}

// The CLI's own seed schedule; every emitted row derives from the master
// seed and fixed tags, so outputs are reproducible from (config, seed).
std::uint64_t mix_seed(std::uint64_t state, std::uint64_t tag) {
  state ^= 0x9e3779b97f4a7c15ULL + tag;
  for (int i = 0; i < 2; ++i) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    state = z ^ (z >> 31);
  }
  return state;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CliError{kExitConfig, "cannot parse " + what + " entry: " + item};
    }
  }
  if (out.empty()) throw CliError{kExitConfig, what + " list is empty"};
  return out;
}

std::vector<std::int32_t> parse_int_list(const std::string& text,
                                         const std::string& what) {
  std::vector<std::int32_t> out;
  for (double v : parse_double_list(text, what)) {
    out.push_back(static_cast<std::int32_t>(v));
  }
  return out;
}

// Run configuration: a plain key = value document, '#' starts a comment.
class Config {
 public:
  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{kExitConfig, "cannot open config file: " + path};
    Config config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
          throw CliError{kExitConfig,
                         path + ":" + std::to_string(line_no) +
                             ": expected 'key = value'"};
        }
        continue;
      }
      config.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return config;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it != values_.end() ? it->second : fallback;
  }

  std::string require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      throw CliError{kExitConfig, "config is missing required key: " + key};
    }
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
      return std::stod(values_.at(key));
    } catch (const std::exception&) {
      throw CliError{kExitConfig, "config key " + key + " is not a number"};
    }
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    try {
      return std::stoll(values_.at(key));
    } catch (const std::exception&) {
      throw CliError{kExitConfig, "config key " + key + " is not an integer"};
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = values_.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw CliError{kExitConfig, "config key " + key + " is not a boolean"};
  }

 private:
  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string{}
                                      : s.substr(first, last - first + 1);
  }

  std::map<std::string, std::string> values_;
};

// Move-only owner for a C API handle.
template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      Free(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }

  T* ptr = nullptr;
};

using DatasetHandle = Handle<dpo_dataset, dpo_dataset_free>;
using TableHandle = Handle<dpo_table, dpo_table_free>;
using UtilitiesHandle = Handle<dpo_utilities, dpo_utilities_free>;

struct LedgerHandle {
  dpo_ledger* ptr = nullptr;
  LedgerHandle() { check(dpo_ledger_create(&ptr), "creating ledger"); }
  LedgerHandle(const LedgerHandle&) = delete;
  LedgerHandle& operator=(const LedgerHandle&) = delete;
  ~LedgerHandle() { dpo_ledger_free(ptr); }
};

// Options shared by the data-driven subcommands; flags override the config.
struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<double> eps;
  std::optional<double> delta;
  std::optional<std::int32_t> k;
  std::optional<double> r;
  std::optional<std::int32_t> h;
  std::optional<std::int32_t> c;
  std::optional<std::int64_t> reps;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool config_required) {
  cmd->set_help_flag("--help", "print usage");
  auto* config_opt =
      cmd->add_option("--config", args.config_path, "run configuration file");
  if (config_required) config_opt->required();
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--out", args.out, "output CSV path");
  cmd->add_option("--eps", args.eps, "epsilon values")->delimiter(',');
  cmd->add_option("--delta", args.delta, "delta");
  cmd->add_option("--k", args.k, "neighbor threshold");
  cmd->add_option("--r", args.r, "radius");
  cmd->add_option("--h", args.h, "number of subspaces to discover");
  cmd->add_option("--c", args.c, "candidate subspace dimension");
  cmd->add_option("--reps", args.reps, "repetitions");
}

struct Run {
  Config config;
  CommonArgs args;

  std::string name;
  std::uint64_t seed = 0;
  double delta = 0.0;
  std::vector<double> eps;
  std::int32_t k = 0;
  std::int64_t reps = 1;
  std::int32_t pool_cap = 0;  // 0 = library default
  DatasetHandle dataset;
  TableHandle table;
};

DatasetHandle build_dataset(const Config& config, const std::string& name) {
  DatasetHandle raw;
  const std::string source = config.require("source");
  if (source == "synthetic") {
    const auto d = static_cast<std::int32_t>(config.get_int("dim", 0));
    if (d < 1) throw CliError{kExitConfig, "synthetic source needs dim >= 1"};
    const auto mean = parse_double_list(config.require("outlier_mean"),
                                        "outlier_mean");
    const auto var =
        parse_double_list(config.require("outlier_var"), "outlier_var");
    if (static_cast<std::int32_t>(mean.size()) != d ||
        static_cast<std::int32_t>(var.size()) != d) {
      throw CliError{kExitConfig, "outlier_mean/outlier_var must have dim entries"};
    }
    check(dpo_dataset_synthetic(
              config.get_int("n_inliers", 0), config.get_int("n_outliers", 0),
              d, mean.data(), var.data(),
              static_cast<std::uint64_t>(config.get_int("data_seed", 1)),
              name.c_str(), &raw.ptr),
          "generating synthetic dataset");
  } else if (source == "csv") {
    const std::string path = config.require("csv_path");
    std::vector<std::string> drops;
    if (config.has("drop_columns")) {
      std::istringstream in(config.get("drop_columns", ""));
      std::string item;
      while (std::getline(in, item, ',')) drops.push_back(item);
    }
    std::vector<const char*> drop_ptrs;
    for (const auto& d : drops) drop_ptrs.push_back(d.c_str());
    const std::string label = config.get("label_column", "");
    const std::string positive = config.get("positive_label", "1");
    check(dpo_dataset_load_csv(
              path.c_str(), label.empty() ? nullptr : label.c_str(),
              drop_ptrs.empty() ? nullptr : drop_ptrs.data(),
              static_cast<std::int32_t>(drop_ptrs.size()), positive.c_str(),
              &raw.ptr),
          "loading CSV dataset");
  } else {
    throw CliError{kExitConfig, "source must be 'synthetic' or 'csv'"};
  }

  if (config.get_bool("standardize", true)) {
    DatasetHandle standardized;
    check(dpo_dataset_standardize(raw.ptr, &standardized.ptr),
          "standardizing dataset");
    return standardized;
  }
  return raw;
}

Run prepare_run(const CommonArgs& args) {
  Run run{Config::load(args.config_path), args, "", 0, 0.0, {}, 0, 1, 0,
          DatasetHandle{}, TableHandle{}};
  const Config& config = run.config;

  run.name = config.get("name", "run");
  run.seed = args.seed.value_or(
      static_cast<std::uint64_t>(config.get_int("seed", 1)));
  run.delta = args.delta.value_or(config.get_double("delta", 0.01));
  if (!args.eps.empty()) {
    run.eps = args.eps;
  } else if (config.has("eps")) {
    run.eps = parse_double_list(config.get("eps", ""), "eps");
  }
  run.k = args.k.value_or(static_cast<std::int32_t>(config.get_int("k", 3)));
  run.reps = args.reps.value_or(config.get_int("reps", 1));
  if (run.reps < 1) throw CliError{kExitConfig, "reps must be >= 1"};
  run.pool_cap = static_cast<std::int32_t>(config.get_int("pool_cap", 0));

  run.dataset = build_dataset(config, run.name);

  if (config.has("kissing_table")) {
    check(dpo_table_load(config.get("kissing_table", "").c_str(), &run.table.ptr),
          "loading kissing-number table");
  } else {
    check(dpo_table_default(&run.table.ptr), "loading kissing-number table");
  }
  return run;
}

std::vector<std::int32_t> active_subspace(const Run& run) {
  if (run.config.has("subspace")) {
    return parse_int_list(run.config.get("subspace", ""), "subspace");
  }
  std::vector<std::int32_t> dims(
      static_cast<std::size_t>(dpo_dataset_dim(run.dataset.ptr)));
  for (std::size_t i = 0; i < dims.size(); ++i) {
    dims[i] = static_cast<std::int32_t>(i) + 1;
  }
  return dims;
}

double resolve_radius(Run& run, const std::vector<std::int32_t>& dims) {
  if (run.args.r) return *run.args.r;
  if (run.config.has("r")) return run.config.get_double("r", 0.0);
  if (run.config.has("r_grid")) {
    const auto grid = parse_double_list(run.config.get("r_grid", ""), "r_grid");
    double best_r = 0.0;
    check(dpo_tune_radius(run.dataset.ptr, dims.data(),
                          static_cast<std::int32_t>(dims.size()), run.k,
                          grid.data(), static_cast<std::int32_t>(grid.size()),
                          &best_r, nullptr),
          "tuning radius");
    std::cerr << "tuned radius r = " << best_r << "\n";
    return best_r;
  }
  throw CliError{kExitConfig, "no radius: set r, r_grid or --r"};
}

class CsvWriter {
 public:
  CsvWriter(const std::optional<std::string>& path, const std::string& header) {
    if (path) {
      file_.open(*path);
      if (!file_) throw CliError{kExitConfig, "cannot open output: " + *path};
      out_ = &file_;
    } else {
      out_ = &std::cout;
    }
    *out_ << header << "\n";
  }

  void row(const std::string& line) { *out_ << line << "\n"; }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void maybe_export_ledger(const Run& run, const LedgerHandle& ledger) {
  if (run.config.has("ledger_out")) {
    check(dpo_ledger_export_jsonl(ledger.ptr,
                                  run.config.get("ledger_out", "").c_str()),
          "exporting ledger");
  }
}

// Outlier count released twice per epsilon, once per calibration: the
// global-sensitivity Gaussian (using the lower bound, the favorable choice
// for that baseline) and the smooth-sensitivity Gaussian.
int run_count(const CommonArgs& args) {
  Run run = prepare_run(args);
  if (run.eps.empty()) {
    throw CliError{kExitConfig, "count needs at least one epsilon (eps/--eps)"};
  }
  const auto dims = active_subspace(run);
  const double radius = resolve_radius(run, dims);

  std::int64_t true_count = 0;
  check(dpo_count_outliers(run.dataset.ptr, dims.data(),
                           static_cast<std::int32_t>(dims.size()), run.k,
                           radius, &true_count),
        "counting outliers");

  std::int64_t gs_lower = 0, gs_upper = 0;
  check(dpo_global_bounds(dpo_dataset_size(run.dataset.ptr),
                          static_cast<std::int32_t>(dims.size()), run.k,
                          run.table.ptr, &gs_lower, &gs_upper),
        "computing global bounds");

  LedgerHandle ledger;
  CsvWriter csv(run.args.out.has_value()
                    ? run.args.out
                    : (run.config.has("out")
                           ? std::optional<std::string>(run.config.get("out", ""))
                           : std::nullopt),
                "dataset,eps,delta,true_count,sigma_global,sigma_smooth,"
                "noisy_global,noisy_smooth,seed");

  // smooth bounds depend on beta and are cached per epsilon
  std::map<double, double> smooth_cache;

  for (std::size_t eps_idx = 0; eps_idx < run.eps.size(); ++eps_idx) {
    const double eps = run.eps[eps_idx];
    double beta = 0.0;
    check(dpo_smooth_beta(eps, run.delta, 1, &beta), "computing beta");
    if (smooth_cache.find(beta) == smooth_cache.end()) {
      double bound = 0.0;
      check(dpo_smooth_bound(run.dataset.ptr, dims.data(),
                             static_cast<std::int32_t>(dims.size()), run.k,
                             radius, beta, run.pool_cap, &bound),
            "computing smooth bound");
      smooth_cache[beta] = bound;
    }
    const double smooth = smooth_cache[beta];

    for (std::int64_t rep = 0; rep < run.reps; ++rep) {
      const std::uint64_t row_seed =
          mix_seed(mix_seed(run.seed, eps_idx), static_cast<std::uint64_t>(rep));
      double noisy_global = 0.0, sigma_global = 0.0;
      check(dpo_gaussian_global(true_count, gs_lower, eps, run.delta,
                                mix_seed(row_seed, 1), &noisy_global,
                                &sigma_global),
            "global Gaussian release");
      double noisy_smooth = 0.0, sigma_smooth = 0.0;
      check(dpo_gaussian_smooth(true_count, smooth, beta, eps, run.delta, 1,
                                mix_seed(row_seed, 2), &noisy_smooth,
                                &sigma_smooth),
            "smooth Gaussian release");
      check(dpo_ledger_record(ledger.ptr, "count release (global Gaussian)",
                              eps, run.delta),
            "recording spend");
      check(dpo_ledger_record(ledger.ptr, "count release (smooth Gaussian)",
                              eps, run.delta),
            "recording spend");

      std::ostringstream row;
      row << run.name << "," << fmt_short(eps) << "," << fmt_short(run.delta)
          << "," << true_count << "," << fmt(sigma_global) << ","
          << fmt(sigma_smooth) << "," << fmt(noisy_global) << ","
          << fmt(noisy_smooth) << "," << row_seed;
      csv.row(row.str());
    }
  }
  maybe_export_ledger(run, ledger);
  return kExitOk;
}

// Binomial coefficient, saturating once it is clearly past any usable
// candidate-family size.
std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > 1'000'000'000) return result;
  }
  return result;
}

// Top-h discovery over the c-dimensional subspace family, averaged over
// repetitions, with follow-up private counts for the discovered subspaces.
// The per-epsilon budget is split: half to discovery, a quarter to each of
// the two count releases (delta split equally across the Gaussian releases).
int run_tophsubspace(const CommonArgs& args) {
  Run run = prepare_run(args);
  if (run.eps.empty()) {
    throw CliError{kExitConfig, "tophsubspace needs at least one epsilon"};
  }
  const auto c = args.c.value_or(
      static_cast<std::int32_t>(run.config.get_int("c", 1)));
  const auto h = args.h.value_or(
      static_cast<std::int32_t>(run.config.get_int("h", 2)));
  const std::int32_t d = dpo_dataset_dim(run.dataset.ptr);
  if (binomial(d, c) > 100000) {
    throw CliError{kExitResource,
                   "candidate family exceeds 10^5 subspaces; lower c"};
  }
  const auto dims_for_r = active_subspace(run);
  const double radius = resolve_radius(run, dims_for_r);

  UtilitiesHandle utilities;
  check(dpo_subspace_utilities(run.dataset.ptr, c, run.k, radius,
                               run.table.ptr, &utilities.ptr),
        "computing subspace utilities");
  const std::int64_t n_candidates = dpo_utilities_count(utilities.ptr);
  if (h < 1 || h > n_candidates) {
    throw CliError{kExitConfig, "h must lie in [1, candidate count]"};
  }

  // Ground truth: configured subspaces when provided, otherwise the exact
  // (non-private) top-h by count with the lexicographic tie-break already
  // baked into candidate order.
  std::vector<std::int64_t> truth;
  if (run.config.has("truth_subspaces")) {
    std::istringstream in(run.config.get("truth_subspaces", ""));
    std::string item;
    while (std::getline(in, item, ';')) {
      const auto want = parse_int_list(item, "truth_subspaces");
      bool found = false;
      for (std::int64_t i = 0; i < n_candidates && !found; ++i) {
        std::vector<std::int32_t> cand(static_cast<std::size_t>(c));
        check(dpo_utilities_get(utilities.ptr, i, cand.data(), nullptr, nullptr),
              "reading candidate");
        if (cand == want) {
          truth.push_back(i);
          found = true;
        }
      }
      if (!found) {
        throw CliError{kExitConfig, "truth subspace not in candidate family: " + item};
      }
    }
  } else {
    std::vector<std::pair<std::int64_t, std::int64_t>> by_count;  // (-count, idx)
    for (std::int64_t i = 0; i < n_candidates; ++i) {
      std::int64_t count = 0;
      check(dpo_utilities_get(utilities.ptr, i, nullptr, nullptr, &count),
            "reading candidate count");
      by_count.emplace_back(-count, i);
    }
    std::sort(by_count.begin(), by_count.end());
    for (std::int32_t i = 0; i < h; ++i) truth.push_back(by_count[static_cast<std::size_t>(i)].second);
  }

  LedgerHandle ledger;
  CsvWriter csv(run.args.out.has_value()
                    ? run.args.out
                    : (run.config.has("out")
                           ? std::optional<std::string>(run.config.get("out", ""))
                           : std::nullopt),
                "dataset,eps,delta,c,h,reps,precision,recall,eps_spent,"
                "delta_spent,seed");

  std::vector<std::int64_t> picks(static_cast<std::size_t>(h), 0);
  std::map<std::pair<std::int64_t, double>, double> smooth_cache;

  for (std::size_t eps_idx = 0; eps_idx < run.eps.size(); ++eps_idx) {
    const double eps = run.eps[eps_idx];
    const double eps_discovery = eps / 2.0;
    const double eps_count = eps / 4.0;
    const double delta_count = run.delta / 2.0;
    double beta = 0.0;
    check(dpo_smooth_beta(eps_count, delta_count, 1, &beta), "computing beta");

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    double eps_spent = 0.0, delta_spent = 0.0;

    for (std::int64_t rep = 0; rep < run.reps; ++rep) {
      const std::uint64_t rep_seed =
          mix_seed(mix_seed(run.seed, eps_idx), static_cast<std::uint64_t>(rep));
      check(dpo_top_h_select(utilities.ptr, h, eps_discovery, rep_seed,
                             picks.data()),
            "top-h selection");

      std::int64_t true_positives = 0;
      for (std::int64_t pick : picks) {
        if (std::find(truth.begin(), truth.end(), pick) != truth.end()) {
          ++true_positives;
        }
      }
      precision_sum += static_cast<double>(true_positives) / h;
      recall_sum += static_cast<double>(true_positives) /
                    static_cast<double>(truth.size());

      // follow-up private counts for the discovered subspaces
      for (std::size_t j = 0; j < picks.size(); ++j) {
        const std::int64_t pick = picks[j];
        const auto key = std::make_pair(pick, beta);
        if (smooth_cache.find(key) == smooth_cache.end()) {
          std::vector<std::int32_t> cand(static_cast<std::size_t>(c));
          check(dpo_utilities_get(utilities.ptr, pick, cand.data(), nullptr,
                                  nullptr),
                "reading candidate");
          double bound = 0.0;
          check(dpo_smooth_bound(run.dataset.ptr, cand.data(), c, run.k, radius,
                                 beta, run.pool_cap, &bound),
                "computing smooth bound");
          smooth_cache[key] = bound;
        }
        std::int64_t exact = 0;
        check(dpo_utilities_get(utilities.ptr, pick, nullptr, nullptr, &exact),
              "reading candidate count");
        double noisy = 0.0, sigma = 0.0;
        check(dpo_gaussian_smooth(exact, smooth_cache[key], beta, eps_count,
                                  delta_count, 1,
                                  mix_seed(rep_seed, 100 + j), &noisy, &sigma),
              "follow-up count release");
      }

      if (rep == 0) {
        // Budget of one execution of the whole query (the repetitions
        // re-estimate the same experiment): discovery recorded at
        // 2 * eps_discovery plus two smooth count releases.
        check(dpo_ledger_record(ledger.ptr,
                                "top-h discovery (2*eps*du accounting)",
                                2.0 * eps_discovery, 0.0),
              "recording spend");
        for (std::int32_t j = 0; j < h; ++j) {
          check(dpo_ledger_record(ledger.ptr,
                                  "follow-up count release (smooth Gaussian)",
                                  eps_count, delta_count),
                "recording spend");
        }
        eps_spent = 2.0 * eps_discovery + h * eps_count;
        delta_spent = h * delta_count;
      }
    }

    std::ostringstream row;
    row << run.name << "," << fmt_short(eps) << "," << fmt_short(run.delta)
        << "," << c << "," << h << "," << run.reps << ","
        << fmt(precision_sum / static_cast<double>(run.reps)) << ","
        << fmt(recall_sum / static_cast<double>(run.reps)) << ","
        << fmt(eps_spent) << "," << fmt(delta_spent) << ","
        << mix_seed(run.seed, eps_idx);
    csv.row(row.str());
  }
  maybe_export_ledger(run, ledger);
  return kExitOk;
}

int run_bounds(const std::optional<std::string>& config_path,
               const std::optional<std::string>& out, std::int32_t k,
               std::int32_t dmax, std::int64_t n_clamp,
               const std::optional<std::string>& table_path) {
  TableHandle table;
  if (table_path) {
    check(dpo_table_load(table_path->c_str(), &table.ptr), "loading table");
  } else if (config_path) {
    const Config config = Config::load(*config_path);
    if (config.has("kissing_table")) {
      check(dpo_table_load(config.get("kissing_table", "").c_str(), &table.ptr),
            "loading table");
    }
  }
  if (table.ptr == nullptr) {
    check(dpo_table_default(&table.ptr), "loading table");
  }

  CsvWriter csv(out, "d,k,lower,upper");
  for (std::int32_t d = 1; d <= dmax; ++d) {
    std::int64_t lower = 0, upper = 0;
    check(dpo_global_bounds(n_clamp, d, k, table.ptr, &lower, &upper),
          "computing bounds");
    std::ostringstream row;
    row << d << "," << k << "," << lower << "," << upper;
    csv.row(row.str());
  }
  return kExitOk;
}

int run_verify_cmd(std::uint64_t seed, bool inject) {
  char* report = nullptr;
  const dpo_status status = dpo_verify_run(seed, inject ? 1 : 0, &report);
  if (report != nullptr) {
    std::cout << report;
    dpo_string_free(report);
  }
  if (status == DPO_OK) return kExitOk;
  if (status == DPO_ERR_VERIFY) return kExitVerify;
  check(status, "running verification");
  return kExitVerify;
}

int run_tune(const CommonArgs& args) {
  Run run = prepare_run(args);
  const auto dims = active_subspace(run);
  if (!run.config.has("r_grid")) {
    throw CliError{kExitConfig, "tune-radius needs r_grid in the config"};
  }
  const auto grid = parse_double_list(run.config.get("r_grid", ""), "r_grid");
  double best_r = 0.0, best_acc = 0.0;
  check(dpo_tune_radius(run.dataset.ptr, dims.data(),
                        static_cast<std::int32_t>(dims.size()), run.k,
                        grid.data(), static_cast<std::int32_t>(grid.size()),
                        &best_r, &best_acc),
        "tuning radius");

  if (run.args.out || run.config.has("out")) {
    CsvWriter csv(run.args.out.has_value()
                      ? run.args.out
                      : std::optional<std::string>(run.config.get("out", "")),
                  "r,accuracy");
    for (double r : grid) {
      double accuracy = 0.0;
      check(dpo_evaluate_detection(run.dataset.ptr, dims.data(),
                                   static_cast<std::int32_t>(dims.size()),
                                   run.k, r, &accuracy, nullptr, nullptr,
                                   nullptr),
            "evaluating detection");
      std::ostringstream row;
      row << fmt_short(r) << "," << fmt(accuracy);
      csv.row(row.str());
    }
  }
  std::cout << "selected_r=" << fmt_short(best_r)
            << " accuracy=" << fmt(best_acc) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private distance-based outlier analysis"};
  // --h is a run parameter, so help answers only to --help
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  CommonArgs count_args;
  auto* count_cmd = app.add_subcommand(
      "count", "private outlier count releases over an epsilon sweep");
  add_common_flags(count_cmd, count_args, true);

  CommonArgs toph_args;
  auto* toph_cmd = app.add_subcommand(
      "tophsubspace", "private top-h subspace discovery with follow-up counts");
  add_common_flags(toph_cmd, toph_args, true);

  std::optional<std::string> bounds_config;
  std::optional<std::string> bounds_out;
  std::optional<std::string> bounds_table;
  std::int32_t bounds_k = 3;
  std::int32_t bounds_dmax = 10;
  std::int64_t bounds_n = 1'000'000'000'000LL;
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "global sensitivity bound sweep over dimensions");
  bounds_cmd->add_option("--config", bounds_config, "run configuration file");
  bounds_cmd->add_option("--out", bounds_out, "output CSV path");
  bounds_cmd->add_option("--k", bounds_k, "neighbor threshold");
  bounds_cmd->add_option("--dmax", bounds_dmax, "largest dimension");
  bounds_cmd->add_option("--n", bounds_n, "record count used for clamping");
  bounds_cmd->add_option("--table", bounds_table, "kissing-number table file");

  std::uint64_t verify_seed = 1;
  bool verify_inject = false;
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the oracle-equivalence and privacy-ratio suites");
  verify_cmd->add_option("--seed", verify_seed, "suite seed");
  verify_cmd->add_flag("--self-test-inject", verify_inject,
                       "perturb one check to confirm failures are reported");

  CommonArgs tune_args;
  auto* tune_cmd = app.add_subcommand(
      "tune-radius", "pick the accuracy-maximizing radius from a grid");
  add_common_flags(tune_cmd, tune_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (count_cmd->parsed()) return run_count(count_args);
    if (toph_cmd->parsed()) return run_tophsubspace(toph_args);
    if (bounds_cmd->parsed()) {
      return run_bounds(bounds_config, bounds_out, bounds_k, bounds_dmax,
                        bounds_n, bounds_table);
    }
    if (verify_cmd->parsed()) return run_verify_cmd(verify_seed, verify_inject);
    if (tune_cmd->parsed()) return run_tune(tune_args);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
