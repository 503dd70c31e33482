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

#include "dpoutlier/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/rng.hpp"

namespace dpo {

void SyntheticSpec::validate() const {
  if (n_inliers < 0 || n_outliers < 0 || n_inliers + n_outliers < 1) {
    throw ArgumentError("synthetic spec needs at least one record");
  }
  if (d < 1) throw ArgumentError("synthetic spec dimension must be >= 1");
  if (static_cast<std::int32_t>(outlier_mean.size()) != d ||
      static_cast<std::int32_t>(outlier_var.size()) != d) {
    throw ArgumentError("outlier mean/variance must have length d");
  }
  for (double v : outlier_var) {
    if (!(v > 0.0)) {
      throw ArgumentError("outlier variance entries must be positive");
    }
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::int64_t n = spec.n_inliers + spec.n_outliers;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * spec.d));
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(n));

  RandomStream rng(spec.seed);
  for (std::int64_t i = 0; i < spec.n_inliers; ++i) {
    for (std::int32_t c = 0; c < spec.d; ++c) values.push_back(rng.normal());
    labels.push_back(Label::Inlier);
  }
  for (std::int64_t i = 0; i < spec.n_outliers; ++i) {
    for (std::int32_t c = 0; c < spec.d; ++c) {
      values.push_back(rng.normal(spec.outlier_mean[static_cast<std::size_t>(c)],
                                  std::sqrt(spec.outlier_var[static_cast<std::size_t>(c)])));
    }
    labels.push_back(Label::Outlier);
  }
  return Dataset::create(std::move(values), n, spec.d, std::move(labels),
                         spec.name);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    // trim surrounding whitespace
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos
                        ? std::string{}
                        : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("CSV file is empty: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  std::vector<std::size_t> feature_cols;
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (options.label_column && header[c] == *options.label_column) {
      label_col = c;
      continue;
    }
    if (std::find(options.drop_columns.begin(), options.drop_columns.end(),
                  header[c]) != options.drop_columns.end()) {
      continue;
    }
    feature_cols.push_back(c);
  }
  if (options.label_column && !label_col) {
    throw ArgumentError("label column '" + *options.label_column +
                        "' not found in CSV header");
  }
  if (feature_cols.empty()) {
    throw ParseError("CSV has no feature columns after drops");
  }

  std::vector<double> values;
  std::vector<Label> labels;
  std::int64_t row_no = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "CSV row " << row_no << " has " << cells.size()
          << " cells, header has " << header.size();
      throw ParseError(msg.str());
    }
    for (std::size_t c : feature_cols) {
      const std::string& cell = cells[c];
      std::size_t consumed = 0;
      double parsed = 0.0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          parsed = std::stod(cell, &consumed);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || consumed != cell.size()) {
        std::ostringstream msg;
        msg << "CSV row " << row_no << ", column '" << header[c]
            << "': cannot parse '" << cell << "' as a number";
        throw ParseError(msg.str());
      }
      values.push_back(parsed);
    }
    if (label_col) {
      labels.push_back(cells[*label_col] == options.positive_label
                           ? Label::Inlier
                           : Label::Outlier);
    }
  }
  const auto d = static_cast<std::int32_t>(feature_cols.size());
  const auto n = static_cast<std::int64_t>(values.size()) / d;
  if (n == 0) throw ParseError("CSV file has no data rows: " + path);
  std::optional<std::vector<Label>> maybe_labels;
  if (label_col) maybe_labels = std::move(labels);
  return Dataset::create(std::move(values), n, d, std::move(maybe_labels),
                         path);
}

Dataset standardize(const Dataset& x) {
  std::vector<double> mean(static_cast<std::size_t>(x.d), 0.0);
  std::vector<double> var(static_cast<std::size_t>(x.d), 0.0);
  for (std::int64_t i = 0; i < x.n; ++i) {
    const auto row = x.row(i);
    for (std::int32_t c = 0; c < x.d; ++c) {
      mean[static_cast<std::size_t>(c)] += row[static_cast<std::size_t>(c)];
    }
  }
  for (double& m : mean) m /= static_cast<double>(x.n);
  for (std::int64_t i = 0; i < x.n; ++i) {
    const auto row = x.row(i);
    for (std::int32_t c = 0; c < x.d; ++c) {
      const double diff =
          row[static_cast<std::size_t>(c)] - mean[static_cast<std::size_t>(c)];
      var[static_cast<std::size_t>(c)] += diff * diff;
    }
  }
  for (double& v : var) v /= static_cast<double>(x.n);  // population variance

  for (std::int32_t c = 0; c < x.d; ++c) {
    if (var[static_cast<std::size_t>(c)] == 0.0) {
      std::ostringstream msg;
      msg << "attribute " << (c + 1)
          << " has zero variance and cannot be standardized";
      throw ArgumentError(msg.str());
    }
  }

  Dataset out = x;
  for (std::int64_t i = 0; i < x.n; ++i) {
    for (std::int32_t c = 0; c < x.d; ++c) {
      double& v = out.values[static_cast<std::size_t>(i * x.d + c)];
      v = (v - mean[static_cast<std::size_t>(c)]) /
          std::sqrt(var[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

MetricsReport evaluate_detection(std::span<const std::int32_t> predicted_outliers,
                                 const Dataset& labeled) {
  if (!labeled.labels) {
    throw ArgumentError("detection metrics require ground-truth labels");
  }
  std::vector<bool> predicted(static_cast<std::size_t>(labeled.n), false);
  for (std::int32_t idx : predicted_outliers) {
    if (idx < 0 || idx >= labeled.n) {
      throw ArgumentError("predicted index out of range");
    }
    predicted[static_cast<std::size_t>(idx)] = true;
  }

  MetricsReport report;
  for (std::int64_t i = 0; i < labeled.n; ++i) {
    const bool truth =
        (*labeled.labels)[static_cast<std::size_t>(i)] == Label::Outlier;
    const bool pred = predicted[static_cast<std::size_t>(i)];
    if (truth && pred) ++report.tp;
    if (!truth && pred) ++report.fp;
    if (truth && !pred) ++report.fn;
    if (!truth && !pred) ++report.tn;
  }
  const double total = static_cast<double>(labeled.n);
  report.accuracy = static_cast<double>(report.tp + report.tn) / total;
  if (report.tp + report.fp > 0) {
    report.precision =
        static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fp);
  } else {
    report.precision_degenerate = true;
  }
  if (report.tp + report.fn > 0) {
    report.recall =
        static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
  } else {
    report.recall_degenerate = true;
  }
  return report;
}

double tune_radius(const Dataset& x, const Subspace& s, std::int32_t k,
                   std::span<const double> grid) {
  if (grid.empty()) throw ArgumentError("radius grid must be nonempty");
  if (!x.labels) throw ArgumentError("radius tuning requires labels");

  double best_r = 0.0;
  double best_accuracy = -1.0;
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    const OutlierParams p{k, r};
    const auto profile = degree_profile(x, s, p);
    const auto predicted = outlier_indices(profile);
    const MetricsReport m = evaluate_detection(predicted, x);
    if (m.accuracy > best_accuracy) {  // strict: ties keep the smaller radius
      best_accuracy = m.accuracy;
      best_r = r;
    }
  }
  return best_r;
}

}  // namespace dpo
