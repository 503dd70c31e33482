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
#include <vector>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/oracle.hpp"
#include "dpoutlier/rng.hpp"
#include "dpoutlier/sensitivity.hpp"
#include "support.hpp"

using namespace dpo;

namespace {

// Five records pairwise within any radius >= 0.2.
Dataset five_point_clique() {
  return test::from_rows({{0.0, 0.0},
                          {0.05, 0.0},
                          {0.0, 0.05},
                          {-0.05, 0.0},
                          {0.0, -0.05}});
}

Dataset random_dataset(RandomStream& rng, std::int64_t n, std::int32_t d,
                       double lo, double hi) {
  std::vector<double> values(static_cast<std::size_t>(n * d));
  for (double& v : values) v = rng.uniform(lo, hi);
  return Dataset::create(std::move(values), n, d);
}

}  // namespace

TEST_CASE("kissing table covers dimensions 1 through 34") {
  const auto& table = KissingNumberTable::embedded_default();
  CHECK(table.max_dim() >= 34);
  CHECK(table.upper_bound(1) == 2);
  CHECK(table.upper_bound(2) == 6);
  for (std::int32_t d = 1; d <= 34; ++d) {
    CHECK(table.has(d));
    // lower <= upper needs K_d >= 2d
    CHECK(table.upper_bound(d) >= 2 * d);
  }
  CHECK_THROWS_AS(table.upper_bound(99), DimensionError);
}

TEST_CASE("kissing table parser") {
  const auto table = KissingNumberTable::parse("1 2 classical\n2 6 classical\n");
  CHECK(table.max_dim() == 2);
  CHECK_THROWS_AS(KissingNumberTable::parse("1 2\n"), ParseError);
  CHECK_THROWS_AS(KissingNumberTable::parse("1 2 a\n1 3 b\n"), ParseError);
  CHECK_THROWS_AS(KissingNumberTable::parse(""), ParseError);
}

TEST_CASE("global sensitivity bounds") {
  const auto& table = KissingNumberTable::embedded_default();
  CHECK(global_sensitivity_bounds(1000, 1, 3, table) ==
        std::pair<std::int64_t, std::int64_t>{7, 7});
  CHECK(global_sensitivity_bounds(1000, 2, 1, table) ==
        std::pair<std::int64_t, std::int64_t>{5, 7});
  CHECK(global_sensitivity_bounds(3, 5, 10, table) ==
        std::pair<std::int64_t, std::int64_t>{3, 3});

  for (std::int32_t d = 1; d <= 34; ++d) {
    for (std::int32_t k : {1, 2, 3, 7}) {
      const auto [lower, upper] =
          global_sensitivity_bounds(1'000'000'000, d, k, table);
      CHECK(lower <= upper);
    }
  }
}

TEST_CASE("cv_set degenerate and clique cases") {
  const Dataset clique = five_point_clique();
  const OutlierParams p{4, 0.5};
  const auto profile = degree_profile(clique, Subspace::full(2), p);

  // all degrees are 4
  for (auto deg : profile.degrees) CHECK(deg == 4);

  // center far from every record
  const std::vector<double> far{10.0, 10.0};
  CHECK(cv_set(clique, far, 4, profile).empty());

  // impossible degree
  CHECK(cv_set(clique, clique.row(0), 5, profile).empty());
  CHECK(cv_set(clique, clique.row(0), -1, profile).empty());

  // center at any record captures the whole level set
  CHECK(cv_set(clique, clique.row(2), 4, profile).size() == 5);
}

TEST_CASE("candidate_pool unions level sets with clamped degrees") {
  // degrees: three isolated groups engineered via distances
  const Dataset x = test::from_rows({{0.0}, {0.05}, {0.1}, {5.0}, {5.05}, {20.0}});
  const auto profile = degree_profile(x, Subspace({1}), {1, 0.2});
  // records 0..2 have degree 2, records 3..4 degree 1, record 5 degree 0

  CHECK(candidate_pool(profile, 1, 0) == std::vector<std::int32_t>{3, 4});
  CHECK(candidate_pool(profile, 1, 1) ==
        std::vector<std::int32_t>{0, 1, 2, 3, 4, 5});
  CHECK(candidate_pool(profile, 0, 0) == std::vector<std::int32_t>{5});
  // t covering every possible degree returns all records
  CHECK(candidate_pool(profile, 3, static_cast<std::int32_t>(x.n)).size() ==
        static_cast<std::size_t>(x.n));
  CHECK_THROWS_AS(candidate_pool(profile, 1, -1), ArgumentError);
}

TEST_CASE("largest coverable subset basics") {
  const double r = 0.5;
  // three points pairwise farther than 2r: only singletons are coverable
  const std::vector<double> spread{0.0, 0.0, 3.0, 0.0, 0.0, 3.0};
  CHECK(largest_coverable_subset(spread, 2, r) == 1);

  // a pool already inside a radius-r ball keeps every point
  const std::vector<double> tight{0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 0.1, 0.1};
  CHECK(largest_coverable_subset(tight, 2, r) == 4);

  CHECK(largest_coverable_subset({}, 2, r) == 0);
}

TEST_CASE("largest coverable subset enforces the pool cap") {
  SearchLimits limits;
  limits.pool_cap = 4;
  const std::vector<double> pool{0, 0, 1, 1, 2, 2, 3, 3, 4, 4};  // 5 points, d=1? no: 10 values d=2
  try {
    largest_coverable_subset(pool, 2, 1.0, limits);
    FAIL("expected a resource-limit error");
  } catch (const ResourceLimitError& e) {
    CHECK(std::string(e.what()).find("4") != std::string::npos);
  }
}

TEST_CASE("resource limits propagate from the subset search") {
  // ten isolated records all share degree 0, so the t=0 pool for k-1 has
  // ten points, above the crafted cap
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({10.0 * i});
  const Dataset x = test::from_rows(rows);
  SearchLimits limits;
  limits.pool_cap = 4;
  CHECK_THROWS_AS(ls_t_bound(x, Subspace({1}), {1, 0.5}, 0, limits),
                  ResourceLimitError);
  CHECK_THROWS_AS(local_sensitivity_bound(x, Subspace({1}), {1, 0.5}, limits),
                  ResourceLimitError);
}

TEST_CASE("bundled table file matches the embedded default") {
  const auto file = KissingNumberTable::load(
      std::string(DPOUTLIER_SOURCE_DIR) + "/data/kissing_numbers.txt");
  const auto& embedded = KissingNumberTable::embedded_default();
  REQUIRE(file.entries().size() == embedded.entries().size());
  for (std::size_t i = 0; i < file.entries().size(); ++i) {
    CHECK(file.entries()[i].dim == embedded.entries()[i].dim);
    CHECK(file.entries()[i].upper == embedded.entries()[i].upper);
    CHECK(file.entries()[i].citation == embedded.entries()[i].citation);
  }
}

TEST_CASE("largest coverable subset equals exhaustive enumeration") {
  RandomStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dim = static_cast<std::int32_t>(1 + rng.below(3));
    const auto n = static_cast<std::int64_t>(rng.below(11));
    std::vector<double> pool(static_cast<std::size_t>(n * dim));
    for (double& v : pool) v = rng.uniform(-1.5, 1.5);
    const double r = rng.uniform(0.2, 1.2);
    CHECK(largest_coverable_subset(pool, dim, r) ==
          oracle::brute_coverable(pool, dim, r));
  }
}

TEST_CASE("local sensitivity bound on degenerate inputs") {
  // clique: V(3) and V(2) are empty at k=3
  CHECK(local_sensitivity_bound(five_point_clique(), Subspace::full(2),
                                {3, 0.5})
            .value == 1.0);

  // single record: clamped to N
  const Dataset lone = test::from_rows({{0.0}});
  CHECK(local_sensitivity_bound(lone, Subspace({1}), {1, 1.0}).value == 1.0);
}

TEST_CASE("local sensitivity bound dominates grid-move recounts") {
  RandomStream rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<std::int64_t>(5 + rng.below(16));  // up to 20
    const Dataset x = random_dataset(rng, n, 2, -2.0, 2.0);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.3, 1.0)};
    const double bound = local_sensitivity_bound(x, s, p).value;

    // Test-only oracle: move each record to every cell of a coarse grid
    // covering the data range plus the radius and recount.
    const std::int64_t baseline = count_outliers(x, s, p);
    std::int64_t observed = 0;
    Dataset moved = x;
    for (std::int64_t rec = 0; rec < n; ++rec) {
      for (double cx = -3.0; cx <= 3.0; cx += 0.75) {
        for (double cy = -3.0; cy <= 3.0; cy += 0.75) {
          moved.values[static_cast<std::size_t>(rec * 2)] = cx;
          moved.values[static_cast<std::size_t>(rec * 2 + 1)] = cy;
          observed = std::max(observed,
                              std::abs(count_outliers(moved, s, p) - baseline));
        }
      }
      moved.values[static_cast<std::size_t>(rec * 2)] =
          x.values[static_cast<std::size_t>(rec * 2)];
      moved.values[static_cast<std::size_t>(rec * 2 + 1)] =
          x.values[static_cast<std::size_t>(rec * 2 + 1)];
    }
    CHECK(static_cast<double>(observed) <= bound);
  }
}

TEST_CASE("local bound stays below the global upper bound") {
  const auto& table = KissingNumberTable::embedded_default();
  RandomStream rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::int64_t>(3 + rng.below(15));
    const Dataset x = random_dataset(rng, n, 2, -1.5, 1.5);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.3, 1.0)};
    const auto [lower, upper] = global_sensitivity_bounds(n, 2, p.k, table);
    (void)lower;
    const double local = local_sensitivity_bound(x, Subspace::full(2), p).value;
    CHECK(local <= static_cast<double>(upper));
  }
}

TEST_CASE("ls_t bound on the clique and at extreme t") {
  const Dataset clique = five_point_clique();
  const Subspace s = Subspace::full(2);

  // t=0 collapses to the local-bound structure (pools are single levels)
  CHECK(ls_t_bound(clique, s, {3, 0.5}, 0).value == 1.0);

  // pools around degrees {2,3,4} pick up the whole degree-4 clique
  CHECK(ls_t_bound(clique, s, {3, 0.5}, 1).value == 5.0);

  // t = N clamps to N
  const Dataset x = test::from_rows({{0.0}, {1.0}, {2.0}, {9.0}});
  CHECK(ls_t_bound(x, Subspace({1}), {1, 0.4},
                   static_cast<std::int32_t>(x.n))
            .value == 4.0);
  CHECK_THROWS_AS(ls_t_bound(x, Subspace({1}), {1, 0.4}, -1), ArgumentError);
}

TEST_CASE("smooth bound prunes early on well-separated dense clusters") {
  // two tight six-point clusters far apart: every record has degree 5, so
  // the level sets around k = 1 stay empty for several t and the very
  // first term decides; pruning then stops the loop at small t
  std::vector<std::vector<double>> rows;
  for (double base : {0.0, 50.0}) {
    for (int i = 0; i < 6; ++i) {
      rows.push_back({base + 0.01 * i, base});
    }
  }
  const Dataset x = test::from_rows(rows);
  const SmoothParams sp{1.5};
  const auto bound = smooth_sensitivity_bound(x, Subspace::full(2), {1, 0.5}, sp);
  CHECK(bound.value == 1.0);
  CHECK(bound.value ==
        oracle::brute_smooth_bound(x, Subspace::full(2), {1, 0.5}, sp));
}

TEST_CASE("pruned smooth bound equals the unpruned loop") {
  RandomStream rng(59);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::int64_t>(4 + rng.below(12));  // 4..15
    Dataset x = random_dataset(rng, n, 2, -2.0, 2.0);
    // occasionally compress half the records into a cluster
    if (trial % 2 == 0) {
      for (std::int64_t i = 0; i < n / 2; ++i) {
        x.values[static_cast<std::size_t>(2 * i)] *= 0.1;
        x.values[static_cast<std::size_t>(2 * i + 1)] *= 0.1;
      }
    }
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(4)),
                          rng.uniform(0.3, 1.0)};
    const SmoothParams sp{rng.uniform(0.05, 2.0)};
    const double pruned =
        smooth_sensitivity_bound(x, Subspace::full(2), p, sp).value;
    const double unpruned =
        oracle::brute_smooth_bound(x, Subspace::full(2), p, sp);
    CHECK(pruned == unpruned);
  }
}

TEST_CASE("smooth bound dominance, clamps and the large-beta limit") {
  RandomStream rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::int64_t>(3 + rng.below(10));
    const Dataset x = random_dataset(rng, n, 2, -1.5, 1.5);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.3, 1.0)};
    const SmoothParams sp{rng.uniform(0.1, 1.0)};
    const double smooth = smooth_sensitivity_bound(x, s, p, sp).value;

    CHECK(smooth >= 1.0);
    CHECK(smooth <= static_cast<double>(n));
    CHECK(smooth >= local_sensitivity_bound(x, s, p).value * std::exp(0.0) -
                        1e-12);
    for (std::int32_t t = 0; t <= n; ++t) {
      const double term = std::exp(-sp.beta * t) * ls_t_bound(x, s, p, t).value;
      CHECK(smooth >= term - 1e-12);
    }

    // beta -> infinity keeps only the t=0 term
    const double big_beta =
        smooth_sensitivity_bound(x, s, p, SmoothParams{1e6}).value;
    CHECK(big_beta == ls_t_bound(x, s, p, 0).value);
  }
}

TEST_CASE("ls_t bound agrees with an enumeration-only recomputation") {
  // recompute the bound with brute subset enumeration in place of the
  // branch-and-bound search
  RandomStream rng(83);
  for (int trial = 0; trial < 15; ++trial) {
    const auto n = static_cast<std::int64_t>(3 + rng.below(8));
    const Dataset x = random_dataset(rng, n, 2, -1.5, 1.5);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.3, 1.0)};
    const auto profile = degree_profile(x, s, p);
    const double scale = 1.0 / std::sqrt(2.0);
    for (std::int32_t t = 0; t + 1 < n; ++t) {
      std::int64_t widest = 0;
      for (std::int64_t center : {static_cast<std::int64_t>(p.k),
                                  static_cast<std::int64_t>(p.k) - 1}) {
        std::vector<double> pool;
        for (std::int32_t idx : candidate_pool(profile, center, t)) {
          pool.push_back(x.row(idx)[0] * scale);
          pool.push_back(x.row(idx)[1] * scale);
        }
        widest = std::max(widest, oracle::brute_coverable(pool, 2, p.r));
      }
      const double expected =
          static_cast<double>(std::min<std::int64_t>(n, widest + t + 1));
      CHECK(ls_t_bound(x, s, p, t).value == expected);
    }
  }
}

TEST_CASE("smooth bound crosses the dense-cluster degree wall at N=50") {
  // 45 clustered records (all mutually neighbors, degree >= 44) and 5
  // isolated ones: once t reaches the cluster degrees the pools hold all
  // records, where the clamp saturates terms at N without full searches
  const auto x = test::small2d_mixture();
  const Subspace s = Subspace::full(2);
  const OutlierParams p{3, 1.1};
  for (double beta : {0.004, 0.028, 0.036}) {
    const auto bound = smooth_sensitivity_bound(x, s, p, SmoothParams{beta});
    CHECK(bound.value >= ls_t_bound(x, s, p, 0).value);
    CHECK(bound.value <= 50.0);
    // Once t reaches the cluster's lowest degree minus k, the pool holds
    // the whole cluster and the clamp saturates the term at N; those terms
    // dominate the pre-wall ramp at these smoothing rates.
    const auto profile = degree_profile(x, s, p);
    std::int32_t cluster_min_degree = 49;
    for (auto deg : profile.degrees) {
      if (deg >= 40) cluster_min_degree = std::min(cluster_min_degree, deg);
    }
    double wall_floor = 0.0;
    for (std::int64_t t = cluster_min_degree - p.k; t <= 50; ++t) {
      wall_floor = std::max(wall_floor, std::exp(-beta * t) * 50.0);
    }
    CHECK(bound.value >= wall_floor - 1e-9);

    const auto again = smooth_sensitivity_bound(x, s, p, SmoothParams{beta});
    CHECK(bound.value == again.value);
  }
}

TEST_CASE("smooth bound of a single record clamps to 1") {
  const Dataset lone = test::from_rows({{0.0, 0.0}});
  for (double beta : {0.01, 0.5, 5.0}) {
    CHECK(smooth_sensitivity_bound(lone, Subspace::full(2), {1, 1.0},
                                   SmoothParams{beta})
              .value == 1.0);
  }
}

TEST_CASE("smoothness surrogate on neighbor datasets") {
  RandomStream rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::int64_t>(4 + rng.below(8));
    const Dataset x = random_dataset(rng, n, 2, -1.5, 1.5);
    Dataset y = x;  // move one record
    const auto rec = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
    y.values[static_cast<std::size_t>(2 * rec)] = rng.uniform(-1.5, 1.5);
    y.values[static_cast<std::size_t>(2 * rec + 1)] = rng.uniform(-1.5, 1.5);

    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.3, 1.0)};
    const SmoothParams sp{rng.uniform(0.1, 1.5)};
    const double on_x = oracle::brute_smooth_bound(x, s, p, sp);
    const double on_y = oracle::brute_smooth_bound(y, s, p, sp);
    CHECK(on_x <= std::exp(sp.beta) * on_y + 1e-9);
    CHECK(on_y <= std::exp(sp.beta) * on_x + 1e-9);
  }
}

TEST_CASE("ls_t bound dominates the exact Hamming-t local sensitivity") {
  const oracle::GridDomain grid{2, 5, -2.0, 2.0};
  RandomStream rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    const auto n = static_cast<std::int64_t>(3 + rng.below(4));  // 3..6
    std::vector<double> values;
    for (std::int64_t rec = 0; rec < n; ++rec) {
      const auto cell = grid.cell(static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(grid.cell_count()))));
      values.insert(values.end(), cell.begin(), cell.end());
    }
    const Dataset x = Dataset::create(std::move(values), n, 2);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(2)),
                          rng.uniform(0.8, 2.2)};

    // t = 0: the bound dominates the exact local sensitivity
    CHECK(static_cast<double>(oracle::brute_local_sensitivity(x, grid, s, p)) <=
          ls_t_bound(x, s, p, 0).value);

    // t = 1: enumerate every single-record replacement and take the worst
    // exact local sensitivity among the shifted datasets.
    std::int64_t worst = 0;
    Dataset shifted = x;
    for (std::int64_t rec = 0; rec < n; ++rec) {
      for (std::int64_t cell_idx = 0; cell_idx < grid.cell_count(); ++cell_idx) {
        const auto cell = grid.cell(cell_idx);
        for (std::int32_t c = 0; c < 2; ++c) {
          shifted.values[static_cast<std::size_t>(rec * 2 + c)] =
              cell[static_cast<std::size_t>(c)];
        }
        worst = std::max(worst,
                         oracle::brute_local_sensitivity(shifted, grid, s, p));
      }
      for (std::int32_t c = 0; c < 2; ++c) {
        shifted.values[static_cast<std::size_t>(rec * 2 + c)] =
            x.values[static_cast<std::size_t>(rec * 2 + c)];
      }
    }
    CHECK(static_cast<double>(worst) <= ls_t_bound(x, s, p, 1).value);
  }
}
