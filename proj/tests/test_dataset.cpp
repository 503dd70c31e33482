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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpoutlier/dataset.hpp"
#include "dpoutlier/errors.hpp"
#include "dpoutlier/rng.hpp"
#include "support.hpp"

using namespace dpo;

TEST_CASE("subspace distance formula") {
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{3.0, 4.0};
  const Subspace both({1, 2});
  CHECK(subspace_distance(a, a, both) == 0.0);
  CHECK(subspace_distance(a, b, both) == doctest::Approx(std::sqrt(25.0 / 2.0)));

  const std::vector<double> c{0.0, 7.0};
  const std::vector<double> d{3.0, 9.0};
  CHECK(subspace_distance(c, d, Subspace({1})) == doctest::Approx(3.0));

  // symmetry
  CHECK(subspace_distance(b, a, both) == subspace_distance(a, b, both));
}

TEST_CASE("subspace distance rejects out-of-range attribute") {
  const std::vector<double> a{0.0};
  CHECK_THROWS_AS(subspace_distance(a, a, Subspace({2})), DimensionError);
}

TEST_CASE("subspace validation") {
  CHECK_THROWS_AS(Subspace(std::vector<std::int32_t>{}), ArgumentError);
  CHECK_THROWS_AS(Subspace({1, 1}), ArgumentError);
  CHECK_THROWS_AS(Subspace({0}), ArgumentError);
  CHECK(Subspace({3, 1}).dims() == std::vector<std::int32_t>{1, 3});
}

TEST_CASE("degree profile on collinear points at spacing r") {
  const double r = 0.5;
  const auto x = test::from_rows({{0.0}, {r}, {2 * r}});
  const auto profile = degree_profile(x, Subspace({1}), {1, r});
  CHECK(profile.degrees == std::vector<std::int32_t>{1, 2, 1});
  // boundary: distance exactly r is a neighbor
}

TEST_CASE("degree profile of a single record") {
  const auto x = test::from_rows({{1.0, 2.0}});
  const auto profile = degree_profile(x, Subspace::full(2), {1, 1.0});
  CHECK(profile.degrees == std::vector<std::int32_t>{0});
  CHECK(count_outliers(profile) == 1);  // degree 0 < k = 1
}

TEST_CASE("two points within r are not outliers at k=1") {
  const auto x = test::from_rows({{0.0}, {0.5}});
  CHECK(count_outliers(x, Subspace({1}), {1, 1.0}) == 0);
}

TEST_CASE("level sets partition the records") {
  const auto x = test::small2d_mixture();
  const auto profile = degree_profile(x, Subspace::full(2), {3, 1.1});
  std::int64_t total = 0;
  for (std::size_t deg = 0; deg < profile.level_sets.size(); ++deg) {
    for (std::int32_t idx : profile.level_sets[deg]) {
      CHECK(profile.degrees[static_cast<std::size_t>(idx)] ==
            static_cast<std::int32_t>(deg));
    }
    total += static_cast<std::int64_t>(profile.level_sets[deg].size());
  }
  CHECK(total == x.n);
}

TEST_CASE("degree recount against an independent double loop") {
  const auto x = test::small2d_mixture();
  const Subspace s = Subspace::full(2);
  const OutlierParams p{3, 1.1};
  const auto profile = degree_profile(x, s, p);

  for (std::int64_t i = 0; i < x.n; ++i) {
    std::int32_t recount = 0;
    for (std::int64_t j = 0; j < x.n; ++j) {
      if (i == j) continue;
      if (subspace_distance(x.row(i), x.row(j), s) <= p.r) ++recount;
    }
    CHECK(profile.degrees[static_cast<std::size_t>(i)] == recount);
  }
}

TEST_CASE("regenerated small 2-d mixture has the planted outlier count") {
  const auto x = test::small2d_mixture();
  CHECK(count_outliers(x, Subspace::full(2), {3, 1.1}) == 5);
}

TEST_CASE("count identity and monotonicity properties") {
  RandomStream rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::int64_t>(2 + rng.below(20));
    std::vector<double> values(static_cast<std::size_t>(n * 2));
    for (double& v : values) v = rng.uniform(-2.0, 2.0);
    const auto x = Dataset::create(values, n, 2);
    const Subspace s = Subspace::full(2);
    const auto k = static_cast<std::int32_t>(1 + rng.below(4));
    const double r = rng.uniform(0.2, 1.5);

    const auto profile = degree_profile(x, s, {k, r});

    // count = N - |{i : degree >= k}|
    std::int64_t high = 0;
    for (auto deg : profile.degrees) {
      if (deg >= k) ++high;
    }
    CHECK(count_outliers(profile) == n - high);

    // sum of degrees is even (neighbor relation is symmetric)
    const std::int64_t degree_sum = std::accumulate(
        profile.degrees.begin(), profile.degrees.end(), std::int64_t{0});
    CHECK(degree_sum % 2 == 0);

    // monotone in r and k
    CHECK(count_outliers(x, s, {k, r + 0.3}) <= count_outliers(profile));
    CHECK(count_outliers(x, s, {k + 1, r}) >= count_outliers(profile));
  }
}

TEST_CASE("permutation invariance of the outlier count") {
  const auto x = test::small2d_mixture();
  const OutlierParams p{3, 1.1};
  const std::int64_t baseline = count_outliers(x, Subspace::full(2), p);

  RandomStream rng(5);
  std::vector<std::int64_t> order(static_cast<std::size_t>(x.n));
  std::iota(order.begin(), order.end(), 0);
  for (std::int64_t i = x.n - 1; i > 0; --i) {
    std::swap(order[static_cast<std::size_t>(i)],
              order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  std::vector<double> shuffled;
  for (std::int64_t i : order) {
    const auto row = x.row(i);
    shuffled.insert(shuffled.end(), row.begin(), row.end());
  }
  const auto y = Dataset::create(std::move(shuffled), x.n, x.d);
  CHECK(count_outliers(y, Subspace::full(2), p) == baseline);
}

TEST_CASE("duplicate records each contribute to degrees") {
  const auto x = test::from_rows({{0.0}, {0.0}, {0.0}});
  const auto profile = degree_profile(x, Subspace({1}), {3, 0.1});
  CHECK(profile.degrees == std::vector<std::int32_t>{2, 2, 2});
}

TEST_CASE("rank_subspaces sorts by count with lexicographic ties") {
  const auto x = test::from_rows({
      {0.0, 0.0, 0.0},
      {0.1, 5.0, 0.2},
      {0.2, 9.0, 0.1},
  });
  // k=1, r=0.5: attribute 2 spreads the records (3 outliers), attributes
  // 1 and 3 keep them together (0 outliers) and tie.
  const auto ranked = rank_subspaces(
      x, {Subspace({3}), Subspace({2}), Subspace({1})}, {1, 0.5});
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].first == Subspace({2}));
  CHECK(ranked[0].second == 3);
  CHECK(ranked[1].first == Subspace({1}));
  CHECK(ranked[2].first == Subspace({3}));
  CHECK(ranked[1].second == ranked[2].second);

  const auto single = rank_subspaces(x, {Subspace({2})}, {1, 0.5});
  REQUIRE(single.size() == 1);
  CHECK(single[0].second == 3);
}

TEST_CASE("wide 10-d mixture ranks the planted attributes first") {
  const auto x = test::wide10d_mixture();
  const auto ranked = rank_subspaces(x, subspace_family(10, 1), {3, 0.4});
  REQUIRE(ranked.size() == 10);
  const bool planted_top =
      (ranked[0].first == Subspace({1}) && ranked[1].first == Subspace({2})) ||
      (ranked[0].first == Subspace({2}) && ranked[1].first == Subspace({1}));
  CHECK(planted_top);
  CHECK(ranked[1].second > ranked[2].second);
}

TEST_CASE("subspace_family enumerates lexicographically") {
  const auto family = subspace_family(4, 2);
  REQUIRE(family.size() == 6);
  CHECK(family.front() == Subspace({1, 2}));
  CHECK(family.back() == Subspace({3, 4}));
  CHECK(std::is_sorted(family.begin(), family.end()));
}
