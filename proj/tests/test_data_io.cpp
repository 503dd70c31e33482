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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "dpoutlier/data_io.hpp"
#include "dpoutlier/errors.hpp"
#include "support.hpp"

using namespace dpo;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents)
      : path(std::string("/tmp/dpoutlier_test_") +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".csv") {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("synthetic generation is reproducible and labeled") {
  SyntheticSpec spec;
  spec.n_inliers = 45;
  spec.n_outliers = 5;
  spec.d = 2;
  spec.outlier_mean = {20.0, 20.0};
  spec.outlier_var = {100.0, 100.0};
  spec.seed = 7;

  const Dataset a = generate_synthetic(spec);
  const Dataset b = generate_synthetic(spec);
  CHECK(a.values == b.values);
  CHECK(a.n == 50);
  CHECK(a.d == 2);
  REQUIRE(a.labels.has_value());
  std::int64_t outliers = 0;
  for (Label l : *a.labels) {
    if (l == Label::Outlier) ++outliers;
  }
  CHECK(outliers == 5);
  // inliers come first
  CHECK((*a.labels)[0] == Label::Inlier);
  CHECK((*a.labels)[49] == Label::Outlier);

  spec.seed = 8;
  CHECK(generate_synthetic(spec).values != a.values);
}

TEST_CASE("synthetic generation without outliers centers near zero") {
  SyntheticSpec spec;
  spec.n_inliers = 500;
  spec.n_outliers = 0;
  spec.d = 3;
  spec.outlier_mean = {0, 0, 0};
  spec.outlier_var = {1, 1, 1};
  spec.seed = 3;
  const Dataset x = generate_synthetic(spec);
  for (std::int32_t c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (std::int64_t i = 0; i < x.n; ++i) mean += x.row(i)[static_cast<std::size_t>(c)];
    mean /= static_cast<double>(x.n);
    CHECK(std::abs(mean) < 0.2);
  }
  for (Label l : *x.labels) CHECK(l == Label::Inlier);
}

TEST_CASE("csv loading without labels") {
  const TempFile file("a,b\n1,2\n3,4\n5.5,-1\n");
  const Dataset x = load_csv(file.path);
  CHECK(x.n == 3);
  CHECK(x.d == 2);
  CHECK_FALSE(x.labels.has_value());
  CHECK(x.row(2)[0] == doctest::Approx(5.5));
}

TEST_CASE("csv loading with labels and drops") {
  const TempFile file(
      "height,category,weight,class\n"
      "1.2,ignore,3.4,pos\n"
      "1.4,ignore,3.0,neg\n"
      "1.6,ignore,2.8,pos\n");
  CsvOptions options;
  options.label_column = "class";
  options.drop_columns = {"category"};
  options.positive_label = "pos";
  const Dataset x = load_csv(file.path, options);
  CHECK(x.n == 3);
  CHECK(x.d == 2);
  REQUIRE(x.labels.has_value());
  CHECK((*x.labels)[0] == Label::Inlier);
  CHECK((*x.labels)[1] == Label::Outlier);
  CHECK((*x.labels)[2] == Label::Inlier);
}

TEST_CASE("csv parse errors carry row and column") {
  const TempFile file("a,b\n1,2\n3,zebra\n");
  try {
    load_csv(file.path);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 3") != std::string::npos);
    CHECK(what.find("'b'") != std::string::npos);
    CHECK(what.find("zebra") != std::string::npos);
  }

  const TempFile ok("a,b\n1,2\n");
  CsvOptions options;
  options.label_column = "missing";
  CHECK_THROWS_AS(load_csv(ok.path, options), ArgumentError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("standardize hits exact moments and is idempotent") {
  const Dataset x = test::from_rows({{0.0, 5.0}, {2.0, 9.0}, {1.0, 7.0}});
  const Dataset z = standardize(x);

  // column (0, 2) maps to (-1, 1)
  CHECK(z.row(0)[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));

  for (std::int32_t c = 0; c < z.d; ++c) {
    double mean = 0.0, var = 0.0;
    for (std::int64_t i = 0; i < z.n; ++i) mean += z.row(i)[static_cast<std::size_t>(c)];
    mean /= static_cast<double>(z.n);
    for (std::int64_t i = 0; i < z.n; ++i) {
      const double diff = z.row(i)[static_cast<std::size_t>(c)] - mean;
      var += diff * diff;
    }
    var /= static_cast<double>(z.n);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-9);
  }

  const Dataset zz = standardize(z);
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    CHECK(zz.values[i] == doctest::Approx(z.values[i]).epsilon(1e-9));
  }

  const Dataset constant = test::from_rows({{1.0, 2.0}, {1.0, 3.0}});
  try {
    standardize(constant);
    FAIL("expected an error naming the attribute");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("attribute 1") != std::string::npos);
  }
}

TEST_CASE("two-point column standardizes to -1, 1") {
  const Dataset x = test::from_rows({{0.0}, {2.0}});
  const Dataset z = standardize(x);
  CHECK(z.row(0)[0] == doctest::Approx(-1.0));
  CHECK(z.row(1)[0] == doctest::Approx(1.0));
}

TEST_CASE("detection metrics arithmetic") {
  // 50 records: 5 true outliers (indices 45..49)
  std::vector<std::vector<double>> rows(50, std::vector<double>{0.0});
  Dataset x = test::from_rows(rows);
  std::vector<Label> labels(50, Label::Inlier);
  for (int i = 45; i < 50; ++i) labels[static_cast<std::size_t>(i)] = Label::Outlier;
  x.labels = labels;

  // predict 4 of the outliers plus 1 inlier
  const std::vector<std::int32_t> predicted{45, 46, 47, 48, 0};
  const MetricsReport m = evaluate_detection(predicted, x);
  CHECK(m.tp == 4);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tn == 44);
  CHECK(m.tp + m.fp + m.fn + m.tn == 50);
  CHECK(m.accuracy == doctest::Approx(0.96));
  CHECK(m.precision == doctest::Approx(0.8));
  CHECK(m.recall == doctest::Approx(0.8));

  // perfect prediction
  const std::vector<std::int32_t> perfect{45, 46, 47, 48, 49};
  const MetricsReport mp = evaluate_detection(perfect, x);
  CHECK(mp.accuracy == 1.0);
  CHECK(mp.precision == 1.0);
  CHECK(mp.recall == 1.0);

  // empty prediction: precision degenerate, recall 0
  const MetricsReport me = evaluate_detection({}, x);
  CHECK(me.precision == 0.0);
  CHECK(me.precision_degenerate);
  CHECK(me.recall == 0.0);
  CHECK_FALSE(me.recall_degenerate);
}

TEST_CASE("radius tuning maximizes accuracy with ties to the smaller radius") {
  const Dataset x = test::small2d_mixture();
  const std::vector<double> grid{0.3, 0.7, 1.1, 1.5, 2.0};
  const double best = tune_radius(x, Subspace::full(2), 3, grid);

  const auto accuracy_at = [&](double r) {
    const auto profile = degree_profile(x, Subspace::full(2), {3, r});
    return evaluate_detection(outlier_indices(profile), x).accuracy;
  };
  for (double r : grid) {
    CHECK(accuracy_at(best) >= accuracy_at(r));
  }

  // single-element grid
  CHECK(tune_radius(x, Subspace::full(2), 3, std::vector<double>{0.9}) == 0.9);

  // all-inlier dataset: every radius ties, the smallest wins
  Dataset inliers = test::from_rows({{0.0}, {0.1}, {0.2}, {0.3}});
  inliers.labels = std::vector<Label>(4, Label::Inlier);
  CHECK(tune_radius(inliers, Subspace({1}), 1,
                    std::vector<double>{2.0, 0.5, 1.0}) == 0.5);
}
