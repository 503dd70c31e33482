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

#include "dpoutlier.h"

#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpoutlier/data_io.hpp"
#include "dpoutlier/dataset.hpp"
#include "dpoutlier/errors.hpp"
#include "dpoutlier/mechanisms.hpp"
#include "dpoutlier/seb.hpp"
#include "dpoutlier/sensitivity.hpp"
#include "dpoutlier/verify.hpp"

struct dpo_dataset {
  dpo::Dataset data;
};

struct dpo_table {
  dpo::KissingNumberTable table;
};

struct dpo_ledger {
  dpo::BudgetLedger ledger;
};

struct dpo_utilities {
  std::vector<dpo::Subspace> candidates;
  std::vector<double> utilities;
  std::vector<std::int64_t> counts;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

dpo_status status_from(const dpo::Error& e) {
  switch (e.code()) {
    case dpo::ErrorCode::Argument:
      return DPO_ERR_ARGUMENT;
    case dpo::ErrorCode::Dimension:
      return DPO_ERR_DIMENSION;
    case dpo::ErrorCode::Parse:
      return DPO_ERR_PARSE;
    case dpo::ErrorCode::Consistency:
      return DPO_ERR_CONSISTENCY;
    case dpo::ErrorCode::Resource:
      return DPO_ERR_RESOURCE;
    case dpo::ErrorCode::Verify:
      return DPO_ERR_VERIFY;
    case dpo::ErrorCode::Io:
      return DPO_ERR_IO;
  }
  return DPO_ERR_INTERNAL;
}

// Runs `body`, translating exceptions to status codes. No exception may
// cross the shared-library boundary.
template <typename Fn>
dpo_status guarded(Fn&& body) {
  try {
    return body();
  } catch (const dpo::Error& e) {
    set_error(e.what());
    return status_from(e);
  } catch (const std::exception& e) {
    set_error(e.what());
    return DPO_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return DPO_ERR_INTERNAL;
  }
}

dpo::Subspace make_subspace(const int32_t* dims, int32_t ndims) {
  if (dims == nullptr || ndims < 1) {
    throw dpo::ArgumentError("subspace index array must be nonempty");
  }
  return dpo::Subspace(std::vector<std::int32_t>(dims, dims + ndims));
}

dpo::SearchLimits make_limits(int32_t pool_cap) {
  dpo::SearchLimits limits;
  if (pool_cap > 0) limits.pool_cap = pool_cap;
  return limits;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dpo_status_name(dpo_status status) {
  switch (status) {
    case DPO_OK:
      return "ok";
    case DPO_ERR_ARGUMENT:
      return "argument";
    case DPO_ERR_DIMENSION:
      return "dimension";
    case DPO_ERR_PARSE:
      return "parse";
    case DPO_ERR_CONSISTENCY:
      return "consistency";
    case DPO_ERR_RESOURCE:
      return "resource-limit";
    case DPO_ERR_VERIFY:
      return "verification";
    case DPO_ERR_IO:
      return "io";
    case DPO_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* dpo_last_error(void) { return g_last_error.c_str(); }

const char* dpo_version(void) { return "0.1.0"; }

dpo_status dpo_dataset_from_rows(const double* values, int64_t n, int32_t d,
                                 const int32_t* labels, const char* name,
                                 dpo_dataset** out) {
  return guarded([&]() {
    if (values == nullptr || out == nullptr) {
      throw dpo::ArgumentError("values and out must be non-null");
    }
    std::optional<std::vector<dpo::Label>> label_vec;
    if (labels != nullptr) {
      std::vector<dpo::Label> ls(static_cast<std::size_t>(n));
      for (int64_t i = 0; i < n; ++i) {
        ls[static_cast<std::size_t>(i)] =
            labels[i] != 0 ? dpo::Label::Outlier : dpo::Label::Inlier;
      }
      label_vec = std::move(ls);
    }
    auto data = dpo::Dataset::create(
        std::vector<double>(values, values + n * d), n, d,
        std::move(label_vec), name != nullptr ? name : "");
    *out = new dpo_dataset{std::move(data)};
    return DPO_OK;
  });
}

dpo_status dpo_dataset_synthetic(int64_t n_inliers, int64_t n_outliers,
                                 int32_t d, const double* outlier_mean,
                                 const double* outlier_var, uint64_t seed,
                                 const char* name, dpo_dataset** out) {
  return guarded([&]() {
    if (outlier_mean == nullptr || outlier_var == nullptr || out == nullptr) {
      throw dpo::ArgumentError("mean, variance and out must be non-null");
    }
    dpo::SyntheticSpec spec;
    spec.n_inliers = n_inliers;
    spec.n_outliers = n_outliers;
    spec.d = d;
    spec.outlier_mean.assign(outlier_mean, outlier_mean + d);
    spec.outlier_var.assign(outlier_var, outlier_var + d);
    spec.seed = seed;
    spec.name = name != nullptr ? name : "synthetic";
    *out = new dpo_dataset{dpo::generate_synthetic(spec)};
    return DPO_OK;
  });
}

dpo_status dpo_dataset_load_csv(const char* path, const char* label_column,
                                const char* const* drop_columns, int32_t n_drop,
                                const char* positive_label, dpo_dataset** out) {
  return guarded([&]() {
    if (path == nullptr || out == nullptr) {
      throw dpo::ArgumentError("path and out must be non-null");
    }
    dpo::CsvOptions options;
    if (label_column != nullptr) options.label_column = label_column;
    for (int32_t i = 0; i < n_drop; ++i) {
      options.drop_columns.emplace_back(drop_columns[i]);
    }
    if (positive_label != nullptr) options.positive_label = positive_label;
    *out = new dpo_dataset{dpo::load_csv(path, options)};
    return DPO_OK;
  });
}

dpo_status dpo_dataset_standardize(const dpo_dataset* in, dpo_dataset** out) {
  return guarded([&]() {
    if (in == nullptr || out == nullptr) {
      throw dpo::ArgumentError("in and out must be non-null");
    }
    *out = new dpo_dataset{dpo::standardize(in->data)};
    return DPO_OK;
  });
}

int64_t dpo_dataset_size(const dpo_dataset* dataset) {
  return dataset != nullptr ? dataset->data.n : 0;
}

int32_t dpo_dataset_dim(const dpo_dataset* dataset) {
  return dataset != nullptr ? dataset->data.d : 0;
}

int dpo_dataset_has_labels(const dpo_dataset* dataset) {
  return dataset != nullptr && dataset->data.labels.has_value() ? 1 : 0;
}

void dpo_dataset_free(dpo_dataset* dataset) { delete dataset; }

dpo_status dpo_count_outliers(const dpo_dataset* dataset, const int32_t* dims,
                              int32_t ndims, int32_t k, double r,
                              int64_t* out_count) {
  return guarded([&]() {
    if (dataset == nullptr || out_count == nullptr) {
      throw dpo::ArgumentError("dataset and out_count must be non-null");
    }
    *out_count = dpo::count_outliers(dataset->data, make_subspace(dims, ndims),
                                     dpo::OutlierParams{k, r});
    return DPO_OK;
  });
}

dpo_status dpo_evaluate_detection(const dpo_dataset* dataset,
                                  const int32_t* dims, int32_t ndims,
                                  int32_t k, double r, double* accuracy,
                                  double* precision, double* recall,
                                  int* degenerate) {
  return guarded([&]() {
    if (dataset == nullptr) throw dpo::ArgumentError("dataset must be non-null");
    const auto profile = dpo::degree_profile(
        dataset->data, make_subspace(dims, ndims), dpo::OutlierParams{k, r});
    const auto predicted = dpo::outlier_indices(profile);
    const dpo::MetricsReport m =
        dpo::evaluate_detection(predicted, dataset->data);
    if (accuracy != nullptr) *accuracy = m.accuracy;
    if (precision != nullptr) *precision = m.precision;
    if (recall != nullptr) *recall = m.recall;
    if (degenerate != nullptr) {
      *degenerate = (m.precision_degenerate || m.recall_degenerate) ? 1 : 0;
    }
    return DPO_OK;
  });
}

dpo_status dpo_tune_radius(const dpo_dataset* dataset, const int32_t* dims,
                           int32_t ndims, int32_t k, const double* grid,
                           int32_t grid_len, double* best_r,
                           double* best_accuracy) {
  return guarded([&]() {
    if (dataset == nullptr || grid == nullptr || best_r == nullptr) {
      throw dpo::ArgumentError("dataset, grid and best_r must be non-null");
    }
    const dpo::Subspace s = make_subspace(dims, ndims);
    const double r = dpo::tune_radius(
        dataset->data, s, k,
        std::span<const double>(grid, static_cast<std::size_t>(grid_len)));
    *best_r = r;
    if (best_accuracy != nullptr) {
      const auto profile =
          dpo::degree_profile(dataset->data, s, dpo::OutlierParams{k, r});
      *best_accuracy =
          dpo::evaluate_detection(dpo::outlier_indices(profile), dataset->data)
              .accuracy;
    }
    return DPO_OK;
  });
}

dpo_status dpo_table_default(dpo_table** out) {
  return guarded([&]() {
    if (out == nullptr) throw dpo::ArgumentError("out must be non-null");
    *out = new dpo_table{dpo::KissingNumberTable::embedded_default()};
    return DPO_OK;
  });
}

dpo_status dpo_table_load(const char* path, dpo_table** out) {
  return guarded([&]() {
    if (path == nullptr || out == nullptr) {
      throw dpo::ArgumentError("path and out must be non-null");
    }
    *out = new dpo_table{dpo::KissingNumberTable::load(path)};
    return DPO_OK;
  });
}

int32_t dpo_table_max_dim(const dpo_table* table) {
  return table != nullptr ? table->table.max_dim() : 0;
}

dpo_status dpo_table_lookup(const dpo_table* table, int32_t d,
                            int64_t* out_kd) {
  return guarded([&]() {
    if (table == nullptr || out_kd == nullptr) {
      throw dpo::ArgumentError("table and out_kd must be non-null");
    }
    *out_kd = table->table.upper_bound(d);
    return DPO_OK;
  });
}

void dpo_table_free(dpo_table* table) { delete table; }

dpo_status dpo_global_bounds(int64_t n, int32_t d, int32_t k,
                             const dpo_table* table, int64_t* lower,
                             int64_t* upper) {
  return guarded([&]() {
    if (table == nullptr || lower == nullptr || upper == nullptr) {
      throw dpo::ArgumentError("table, lower and upper must be non-null");
    }
    const auto [lo, hi] = dpo::global_sensitivity_bounds(n, d, k, table->table);
    *lower = lo;
    *upper = hi;
    return DPO_OK;
  });
}

dpo_status dpo_local_bound(const dpo_dataset* dataset, const int32_t* dims,
                           int32_t ndims, int32_t k, double r,
                           int32_t pool_cap, double* out_bound) {
  return guarded([&]() {
    if (dataset == nullptr || out_bound == nullptr) {
      throw dpo::ArgumentError("dataset and out_bound must be non-null");
    }
    *out_bound = dpo::local_sensitivity_bound(
                     dataset->data, make_subspace(dims, ndims),
                     dpo::OutlierParams{k, r}, make_limits(pool_cap))
                     .value;
    return DPO_OK;
  });
}

dpo_status dpo_smooth_bound(const dpo_dataset* dataset, const int32_t* dims,
                            int32_t ndims, int32_t k, double r, double beta,
                            int32_t pool_cap, double* out_bound) {
  return guarded([&]() {
    if (dataset == nullptr || out_bound == nullptr) {
      throw dpo::ArgumentError("dataset and out_bound must be non-null");
    }
    *out_bound = dpo::smooth_sensitivity_bound(
                     dataset->data, make_subspace(dims, ndims),
                     dpo::OutlierParams{k, r}, dpo::SmoothParams{beta},
                     make_limits(pool_cap))
                     .value;
    return DPO_OK;
  });
}

dpo_status dpo_seb_radius(const double* points, int64_t n, int32_t d,
                          double* out_radius) {
  return guarded([&]() {
    if (points == nullptr || out_radius == nullptr) {
      throw dpo::ArgumentError("points and out_radius must be non-null");
    }
    *out_radius =
        dpo::smallest_enclosing_ball(
            std::span<const double>(points, static_cast<std::size_t>(n * d)), d)
            .radius;
    return DPO_OK;
  });
}

dpo_status dpo_smooth_beta(double epsilon, double delta, int32_t p,
                           double* out_beta) {
  return guarded([&]() {
    if (out_beta == nullptr) throw dpo::ArgumentError("out_beta must be non-null");
    *out_beta = dpo::smooth_beta(dpo::PrivacyParams{epsilon, delta, p});
    return DPO_OK;
  });
}

dpo_status dpo_gaussian_global(int64_t count, int64_t gs_upper, double epsilon,
                               double delta, uint64_t seed, double* noisy,
                               double* sigma) {
  return guarded([&]() {
    const auto release = dpo::gaussian_by_global(
        count, gs_upper, dpo::PrivacyParams{epsilon, delta, 1}, seed);
    if (noisy != nullptr) *noisy = release.value;
    if (sigma != nullptr) *sigma = release.scale.sigma;
    return DPO_OK;
  });
}

dpo_status dpo_gaussian_smooth(int64_t count, double smooth_bound,
                               double bound_beta, double epsilon, double delta,
                               int32_t p, uint64_t seed, double* noisy,
                               double* sigma) {
  return guarded([&]() {
    dpo::SensitivityBound bound;
    bound.kind = dpo::BoundKind::SmoothUpper;
    bound.value = smooth_bound;
    bound.beta = bound_beta;
    const auto release = dpo::gaussian_by_smooth(
        count, bound, dpo::PrivacyParams{epsilon, delta, p}, seed);
    if (noisy != nullptr) *noisy = release.value;
    if (sigma != nullptr) *sigma = release.scale.sigma;
    return DPO_OK;
  });
}

dpo_status dpo_subspace_utilities(const dpo_dataset* dataset, int32_t c,
                                  int32_t k, double r, const dpo_table* table,
                                  dpo_utilities** out) {
  return guarded([&]() {
    if (dataset == nullptr || table == nullptr || out == nullptr) {
      throw dpo::ArgumentError("dataset, table and out must be non-null");
    }
    auto holder = std::make_unique<dpo_utilities>();
    holder->candidates = dpo::subspace_family(dataset->data.d, c);
    const dpo::OutlierParams params{k, r};
    for (const dpo::Subspace& s : holder->candidates) {
      holder->counts.push_back(dpo::count_outliers(dataset->data, s, params));
      holder->utilities.push_back(
          dpo::subspace_utility(dataset->data, s, params, table->table));
    }
    *out = holder.release();
    return DPO_OK;
  });
}

int64_t dpo_utilities_count(const dpo_utilities* utilities) {
  return utilities != nullptr
             ? static_cast<int64_t>(utilities->candidates.size())
             : 0;
}

dpo_status dpo_utilities_get(const dpo_utilities* utilities, int64_t index,
                             int32_t* dims_out, double* utility,
                             int64_t* exact_count) {
  return guarded([&]() {
    if (utilities == nullptr) {
      throw dpo::ArgumentError("utilities must be non-null");
    }
    if (index < 0 ||
        index >= static_cast<int64_t>(utilities->candidates.size())) {
      throw dpo::ArgumentError("candidate index out of range");
    }
    const auto& subspace = utilities->candidates[static_cast<std::size_t>(index)];
    if (dims_out != nullptr) {
      const auto& dims = subspace.dims();
      for (std::size_t i = 0; i < dims.size(); ++i) dims_out[i] = dims[i];
    }
    if (utility != nullptr) {
      *utility = utilities->utilities[static_cast<std::size_t>(index)];
    }
    if (exact_count != nullptr) {
      *exact_count = utilities->counts[static_cast<std::size_t>(index)];
    }
    return DPO_OK;
  });
}

dpo_status dpo_top_h_select(const dpo_utilities* utilities, int32_t h,
                            double epsilon, uint64_t seed,
                            int64_t* out_indices) {
  return guarded([&]() {
    if (utilities == nullptr || out_indices == nullptr) {
      throw dpo::ArgumentError("utilities and out_indices must be non-null");
    }
    const auto picks =
        dpo::top_h_select(utilities->utilities, h, epsilon, seed);
    for (std::size_t i = 0; i < picks.size(); ++i) {
      out_indices[i] = static_cast<int64_t>(picks[i]);
    }
    return DPO_OK;
  });
}

void dpo_utilities_free(dpo_utilities* utilities) { delete utilities; }

dpo_status dpo_ledger_create(dpo_ledger** out) {
  return guarded([&]() {
    if (out == nullptr) throw dpo::ArgumentError("out must be non-null");
    *out = new dpo_ledger{};
    return DPO_OK;
  });
}

dpo_status dpo_ledger_record(dpo_ledger* ledger, const char* description,
                             double epsilon, double delta) {
  return guarded([&]() {
    if (ledger == nullptr) throw dpo::ArgumentError("ledger must be non-null");
    ledger->ledger.record(description != nullptr ? description : "", epsilon,
                          delta);
    return DPO_OK;
  });
}

dpo_status dpo_ledger_totals(const dpo_ledger* ledger, double* epsilon_total,
                             double* delta_total) {
  return guarded([&]() {
    if (ledger == nullptr) throw dpo::ArgumentError("ledger must be non-null");
    if (epsilon_total != nullptr) *epsilon_total = ledger->ledger.epsilon_total();
    if (delta_total != nullptr) *delta_total = ledger->ledger.delta_total();
    return DPO_OK;
  });
}

dpo_status dpo_ledger_export_jsonl(const dpo_ledger* ledger, const char* path) {
  return guarded([&]() {
    if (ledger == nullptr || path == nullptr) {
      throw dpo::ArgumentError("ledger and path must be non-null");
    }
    ledger->ledger.export_jsonl(path);
    return DPO_OK;
  });
}

void dpo_ledger_free(dpo_ledger* ledger) { delete ledger; }

dpo_status dpo_verify_run(uint64_t seed, int inject_failure,
                          char** out_report) {
  return guarded([&]() {
    dpo::verify::Options options;
    options.seed = seed;
    options.inject_failure = inject_failure != 0;
    const dpo::verify::Report report = dpo::verify::run(options);
    if (out_report != nullptr) *out_report = dup_string(report.format());
    if (!report.all_passed()) {
      set_error("one or more verification checks failed");
      return DPO_ERR_VERIFY;
    }
    return DPO_OK;
  });
}

void dpo_string_free(char* s) { delete[] s; }

}  // extern "C"
