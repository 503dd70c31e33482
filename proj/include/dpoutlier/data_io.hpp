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

#ifndef DPOUTLIER_DATA_IO_HPP
#define DPOUTLIER_DATA_IO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpoutlier/dataset.hpp"

namespace dpo {

// Planted-outlier mixture: n_inliers standard Gaussian records plus
// n_outliers records drawn from N(outlier_mean, diag(outlier_var)).
struct SyntheticSpec {
  std::int64_t n_inliers = 0;
  std::int64_t n_outliers = 0;
  std::int32_t d = 0;
  std::vector<double> outlier_mean;  // size d
  std::vector<double> outlier_var;   // size d, entries > 0
  std::uint64_t seed = 0;
  std::string name = "synthetic";

  void validate() const;
};

// Labeled dataset, inliers first; identical spec and seed give identical
// bytes.
Dataset generate_synthetic(const SyntheticSpec& spec);

struct CsvOptions {
  std::optional<std::string> label_column;
  std::vector<std::string> drop_columns;
  // Records whose label cell equals this value are inliers; everything else
  // is an outlier.
  std::string positive_label = "1";
};

// Comma-separated, first line header, numeric cells parsed as decimal
// floats. No quoting support.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

// Per-attribute shift/scale to mean 0 and population variance 1.
// A zero-variance attribute is an error naming the attribute.
Dataset standardize(const Dataset& x);

struct MetricsReport {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // Set when the respective denominator was zero and the metric was
  // reported as 0 rather than failing the sweep.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
};

// Confusion counts with "outlier" as the positive class.
MetricsReport evaluate_detection(std::span<const std::int32_t> predicted_outliers,
                                 const Dataset& labeled);

// Grid radius maximizing detection accuracy; ties go to the smaller radius.
double tune_radius(const Dataset& x, const Subspace& s, std::int32_t k,
                   std::span<const double> grid);

}  // namespace dpo

#endif  // DPOUTLIER_DATA_IO_HPP
