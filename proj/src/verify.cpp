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

#include "dpoutlier/verify.hpp"

#include <cmath>
#include <sstream>

#include "dpoutlier/dataset.hpp"
#include "dpoutlier/mechanisms.hpp"
#include "dpoutlier/oracle.hpp"
#include "dpoutlier/rng.hpp"
#include "dpoutlier/seb.hpp"
#include "dpoutlier/sensitivity.hpp"

namespace dpo::verify {

namespace {

std::vector<double> random_points(RandomStream& rng, std::int64_t n,
                                  std::int32_t dim, double lo, double hi) {
  std::vector<double> out(static_cast<std::size_t>(n * dim));
  for (double& v : out) v = rng.uniform(lo, hi);
  return out;
}

CheckResult check_seb_against_support_oracle(const Options& opt) {
  CheckResult result{"seb-vs-support-subset-oracle", opt.seb_instances, 0, ""};
  for (std::int64_t i = 0; i < opt.seb_instances; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, 0x5eb, static_cast<std::uint64_t>(i));
    RandomStream rng(seed);
    const auto dim = static_cast<std::int32_t>(1 + rng.below(3));
    const auto n = static_cast<std::int64_t>(1 + rng.below(8));
    const std::vector<double> pts = random_points(rng, n, dim, -1.0, 1.0);
    const double solver = smallest_enclosing_ball(pts, dim).radius;
    const double oracle_radius = oracle::brute_seb_radius(pts, dim);
    if (std::abs(solver - oracle_radius) > 1e-9) {
      ++result.failures;
      if (result.detail.empty()) {
        std::ostringstream d;
        d << "seed " << seed << ": solver " << solver << " vs oracle "
          << oracle_radius;
        result.detail = d.str();
      }
    }
  }
  return result;
}

CheckResult check_coverable_against_enumeration(const Options& opt) {
  CheckResult result{"coverable-subset-vs-enumeration", opt.coverable_pools, 0,
                     ""};
  for (std::int64_t i = 0; i < opt.coverable_pools; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, 0xC0F, static_cast<std::uint64_t>(i));
    RandomStream rng(seed);
    const auto dim = static_cast<std::int32_t>(1 + rng.below(3));
    const auto n = static_cast<std::int64_t>(rng.below(11));  // 0..10
    const double r = rng.uniform(0.2, 1.2);
    const std::vector<double> pool = random_points(rng, n, dim, -1.5, 1.5);
    std::int64_t fast = largest_coverable_subset(pool, dim, r);
    if (opt.inject_failure && i == 0) fast += 1;
    const std::int64_t brute = oracle::brute_coverable(pool, dim, r);
    if (fast != brute) {
      ++result.failures;
      if (result.detail.empty()) {
        std::ostringstream d;
        d << "seed " << seed << ": search " << fast << " vs enumeration "
          << brute;
        result.detail = d.str();
      }
    }
  }
  return result;
}

Dataset random_small_dataset(RandomStream& rng, std::int64_t n,
                             std::int32_t dim) {
  // Half clustered, half spread, so degree level sets are populated.
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * dim));
  for (std::int64_t i = 0; i < n; ++i) {
    const bool clustered = i % 2 == 0;
    for (std::int32_t c = 0; c < dim; ++c) {
      values.push_back(clustered ? rng.uniform(-0.4, 0.4)
                                 : rng.uniform(-2.0, 2.0));
    }
  }
  return Dataset::create(std::move(values), n, dim);
}

CheckResult check_smooth_pruning(const Options& opt) {
  CheckResult result{"smooth-bound-pruned-vs-unpruned", opt.smooth_instances,
                     0, ""};
  for (std::int64_t i = 0; i < opt.smooth_instances; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, 0x500, static_cast<std::uint64_t>(i));
    RandomStream rng(seed);
    const auto n = static_cast<std::int64_t>(5 + rng.below(11));  // 5..15
    const Dataset x = random_small_dataset(rng, n, 2);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(4)),
                          rng.uniform(0.3, 1.0)};
    const SmoothParams sp{rng.uniform(0.05, 2.0)};
    const double pruned = smooth_sensitivity_bound(x, s, p, sp).value;
    const double unpruned = oracle::brute_smooth_bound(x, s, p, sp);
    if (pruned != unpruned) {
      ++result.failures;
      if (result.detail.empty()) {
        std::ostringstream d;
        d << "seed " << seed << ": pruned " << pruned << " vs unpruned "
          << unpruned;
        result.detail = d.str();
      }
    }
  }
  return result;
}

CheckResult check_local_bound_soundness(const Options& opt) {
  CheckResult result{"local-sensitivity-bound-soundness", opt.local_instances,
                     0, ""};
  const oracle::GridDomain grid{2, 5, -2.0, 2.0};
  for (std::int64_t i = 0; i < opt.local_instances; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, 0x10C, static_cast<std::uint64_t>(i));
    RandomStream rng(seed);
    const auto n = static_cast<std::int64_t>(2 + rng.below(7));  // 2..8
    // Records sit on grid cells so single-record moves stay in-domain.
    std::vector<double> values;
    for (std::int64_t rec = 0; rec < n; ++rec) {
      const auto cell = grid.cell(static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(grid.cell_count()))));
      values.insert(values.end(), cell.begin(), cell.end());
    }
    const Dataset x = Dataset::create(std::move(values), n, 2);
    const Subspace s = Subspace::full(2);
    const OutlierParams p{static_cast<std::int32_t>(1 + rng.below(3)),
                          rng.uniform(0.5, 2.5)};
    const std::int64_t exact = oracle::brute_local_sensitivity(x, grid, s, p);
    const double bound = local_sensitivity_bound(x, s, p).value;
    if (static_cast<double>(exact) > bound) {
      ++result.failures;
      if (result.detail.empty()) {
        std::ostringstream d;
        d << "seed " << seed << ": exact " << exact << " above bound " << bound;
        result.detail = d.str();
      }
    }
  }
  return result;
}

CheckResult check_exponential_two_point(const Options& opt) {
  CheckResult result{"exponential-mechanism-two-point", opt.em_draws, 0, ""};
  const std::vector<double> utilities{1.0, 0.0};
  const double eps = std::log(3.0);
  RandomStream rng(derive_seed(opt.seed, 0xE21));
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < opt.em_draws; ++i) {
    if (exponential_choice(utilities, eps, rng) == 0) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / static_cast<double>(opt.em_draws);
  std::ostringstream d;
  d << "P(A) = " << p_hat << " (expected 0.75)";
  result.detail = d.str();
  if (std::abs(p_hat - 0.75) > 0.01) result.failures = 1;
  return result;
}

CheckResult check_empirical_privacy_ratio(const Options& opt) {
  CheckResult result{"empirical-privacy-ratio", opt.dp_draws, 0, ""};

  // Neighbor pair on a 5x5 grid domain (one record moved), candidates are
  // the 1-dimensional subspaces, mechanism draws with eps = 0.5.
  const double eps = 0.5;
  const OutlierParams p{1, 1.0};
  const auto& table = KissingNumberTable::embedded_default();

  const std::vector<double> base{
      -2.0, -2.0, -2.0, -1.0, 2.0, 2.0, 2.0, 1.0, 0.0, 0.0,
  };
  std::vector<double> moved = base;
  moved[8] = 2.0;  // move record 4 from (0,0) to (2,0)
  const Dataset x = Dataset::create(base, 5, 2);
  const Dataset xp = Dataset::create(moved, 5, 2);

  const std::vector<Subspace> candidates = subspace_family(2, 1);
  std::vector<double> u_x, u_xp;
  for (const Subspace& s : candidates) {
    u_x.push_back(subspace_utility(x, s, p, table));
    u_xp.push_back(subspace_utility(xp, s, p, table));
  }

  const auto result_check = oracle::empirical_dp_check(
      [&](RandomStream& rng) { return exponential_choice(u_x, eps, rng); },
      [&](RandomStream& rng) { return exponential_choice(u_xp, eps, rng); },
      candidates.size(), opt.dp_draws, derive_seed(opt.seed, 0xD9));

  // The utility has sensitivity at most 1, so ratios stay within
  // exp(2 * eps * 1) up to sampling error.
  const double bound_log = 2.0 * eps;
  std::ostringstream d;
  d << "max log-ratio " << result_check.max_log_ratio << " vs bound "
    << bound_log;
  result.detail = d.str();
  if (!result_check.within(bound_log, 3.0) || result_check.insufficient_draws) {
    result.failures = 1;
  }
  return result;
}

}  // namespace

bool Report::all_passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed()) return false;
  }
  return true;
}

std::string Report::format() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.passed() ? "[PASS] " : "[FAIL] ") << c.name << ": "
        << c.instances << " instances";
    if (!c.passed()) out << ", " << c.failures << " failed";
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  return out.str();
}

Report run(const Options& options) {
  Report report;
  report.checks.push_back(check_seb_against_support_oracle(options));
  report.checks.push_back(check_coverable_against_enumeration(options));
  report.checks.push_back(check_smooth_pruning(options));
  report.checks.push_back(check_local_bound_soundness(options));
  report.checks.push_back(check_exponential_two_point(options));
  report.checks.push_back(check_empirical_privacy_ratio(options));
  return report;
}

}  // namespace dpo::verify
