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

#include "dpoutlier/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/seb.hpp"

namespace dpo {

void SmoothParams::validate() const {
  if (!(beta > 0.0)) throw ArgumentError("smoothing rate beta must be positive");
}

std::pair<std::int64_t, std::int64_t> global_sensitivity_bounds(
    std::int64_t n, std::int32_t d, std::int32_t k,
    const KissingNumberTable& table) {
  if (n < 1) throw ArgumentError("record count must be at least 1");
  if (k < 1) throw ArgumentError("neighbor threshold k must be at least 1");
  if (d < 1) throw ArgumentError("dimension must be at least 1");
  const std::int64_t kd = table.upper_bound(d);

  const std::int64_t lower =
      std::min<std::int64_t>(n, 2 * static_cast<std::int64_t>(d) * k + 1);
  std::int64_t packed;  // k * K_d + 1, saturating
  if (kd > (std::numeric_limits<std::int64_t>::max() - 1) / k) {
    packed = std::numeric_limits<std::int64_t>::max();
  } else {
    packed = k * kd + 1;
  }
  const std::int64_t upper = std::min<std::int64_t>(n, packed);
  return {lower, upper};
}

std::vector<std::int32_t> cv_set(const Dataset& x,
                                 std::span<const double> center,
                                 std::int64_t degree,
                                 const DegreeProfile& profile) {
  std::vector<std::int32_t> out;
  for (std::int32_t idx : profile.level_set(degree)) {
    if (within_radius(center, x.row(idx), profile.subspace,
                      profile.params.r)) {
      out.push_back(idx);
    }
  }
  return out;
}

std::vector<std::int32_t> candidate_pool(const DegreeProfile& profile,
                                         std::int64_t k, std::int32_t t) {
  if (t < 0) throw ArgumentError("Hamming radius t must be nonnegative");
  std::vector<std::int32_t> pool;
  for (std::int64_t deg = k - t; deg <= k + t; ++deg) {
    const auto level = profile.level_set(deg);
    pool.insert(pool.end(), level.begin(), level.end());
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

struct LcsOutcome {
  std::int64_t value = 0;
  bool exact = true;  // false when the search stopped at `stop_at`
};

// Depth-first include/exclude search for the largest r-coverable subset.
// A branch dies as soon as its chosen subset is no longer coverable (the
// enclosing-ball radius is monotone under inclusion), and subtrees that
// cannot beat the best size found so far are skipped. `stop_at` allows the
// caller to stop once the answer is provably at least that large; the
// returned value is exact whenever it is below `stop_at`.
class CoverableSearch {
 public:
  CoverableSearch(std::span<const double> pool, std::int32_t dim, double r,
                  std::int64_t stop_at, std::uint64_t& node_budget)
      : pool_(pool),
        dim_(dim),
        r_(r),
        stop_at_(stop_at),
        node_budget_(node_budget),
        n_(static_cast<std::int64_t>(pool.size()) / dim) {}

  LcsOutcome run() {
    if (n_ == 0) return {0, true};
    if (stop_at_ <= 0) return {0, false};
    if (dim_ == 1) return run_window();

    order_by_centroid_distance();
    chosen_.reserve(static_cast<std::size_t>(n_) *
                    static_cast<std::size_t>(dim_));
    dfs(0);
    return {best_, best_ < stop_at_};
  }

 private:
  // In one dimension the smallest enclosing ball of a set is the midpoint of
  // its extremes, so the largest coverable subset is the densest window of
  // width 2(r + tol) over the sorted coordinates.
  LcsOutcome run_window() {
    std::vector<double> xs(pool_.begin(), pool_.end());
    std::sort(xs.begin(), xs.end());
    const double width = 2.0 * (r_ + kCoverTolerance);
    std::int64_t best = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < xs.size(); ++hi) {
      while (xs[hi] - xs[lo] > width) ++lo;
      best = std::max<std::int64_t>(best, static_cast<std::int64_t>(hi - lo) + 1);
    }
    return {best, true};
  }

  void order_by_centroid_distance() {
    std::vector<double> centroid(static_cast<std::size_t>(dim_), 0.0);
    for (std::int64_t i = 0; i < n_; ++i) {
      for (std::int32_t c = 0; c < dim_; ++c) {
        centroid[static_cast<std::size_t>(c)] += pool_[i * dim_ + c];
      }
    }
    for (double& v : centroid) v /= static_cast<double>(n_);

    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<double> dist(static_cast<std::size_t>(n_), 0.0);
    for (std::int64_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::int32_t c = 0; c < dim_; ++c) {
        const double diff = pool_[i * dim_ + c] - centroid[static_cast<std::size_t>(c)];
        acc += diff * diff;
      }
      dist[static_cast<std::size_t>(i)] = acc;
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&dist](std::int64_t a, std::int64_t b) {
                       return dist[static_cast<std::size_t>(a)] <
                              dist[static_cast<std::size_t>(b)];
                     });
  }

  // Invariant on entry: the chosen subset is coverable.
  void dfs(std::int64_t i) {
    best_ = std::max<std::int64_t>(
        best_, static_cast<std::int64_t>(chosen_.size()) / dim_);
    if (best_ >= stop_at_) return;
    if (i == n_) return;
    const auto chosen_count = static_cast<std::int64_t>(chosen_.size()) / dim_;
    if (chosen_count + (n_ - i) <= best_) return;

    const std::int64_t p = order_[static_cast<std::size_t>(i)];
    chosen_.insert(chosen_.end(), pool_.begin() + p * dim_,
                   pool_.begin() + (p + 1) * dim_);
    if (node_budget_ == 0) {
      throw ResourceLimitError(
          "coverable-subset search exhausted its node budget");
    }
    --node_budget_;
    if (is_coverable(chosen_, dim_, r_)) {
      dfs(i + 1);
    }
    chosen_.resize(chosen_.size() - static_cast<std::size_t>(dim_));
    if (best_ >= stop_at_) return;
    dfs(i + 1);
  }

  std::span<const double> pool_;
  std::int32_t dim_;
  double r_;
  std::int64_t stop_at_;
  std::uint64_t& node_budget_;
  std::int64_t n_;
  std::vector<std::int64_t> order_;
  std::vector<double> chosen_;
  std::int64_t best_ = 0;
};

LcsOutcome bounded_lcs(std::span<const double> pool, std::int32_t dim,
                       double r, std::int64_t stop_at,
                       std::uint64_t& node_budget) {
  return CoverableSearch(pool, dim, r, stop_at, node_budget).run();
}

// Projects records onto the subspace, rescaling coordinates by 1/sqrt(|S|)
// so that Euclidean balls over the result coincide with radius-r balls of
// the |S|-normalized subspace metric.
std::vector<double> project_records(const Dataset& x,
                                    std::span<const std::int32_t> indices,
                                    const Subspace& s) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.size()));
  std::vector<double> out;
  out.reserve(indices.size() * static_cast<std::size_t>(s.size()));
  for (std::int32_t idx : indices) {
    const auto row = x.row(idx);
    for (std::int32_t dim : s.dims()) {
      out.push_back(row[static_cast<std::size_t>(dim - 1)] * scale);
    }
  }
  return out;
}

}  // namespace

std::int64_t largest_coverable_subset(std::span<const double> pool,
                                      std::int32_t dim, double r,
                                      const SearchLimits& limits) {
  if (dim < 1) throw ArgumentError("pool dimension must be at least 1");
  if (!(r > 0.0)) throw ArgumentError("coverability radius must be positive");
  if (pool.size() % static_cast<std::size_t>(dim) != 0) {
    throw ArgumentError("pool buffer must hold an n x dim matrix");
  }
  const auto n = static_cast<std::int64_t>(pool.size()) / dim;
  if (n == 0) return 0;
  if (n > limits.pool_cap) {
    std::ostringstream msg;
    msg << "pool of " << n << " points exceeds the coverable-subset search cap "
        << limits.pool_cap;
    throw ResourceLimitError(msg.str());
  }
  std::uint64_t budget = limits.node_budget;
  return bounded_lcs(pool, dim, r, n + 1, budget).value;
}

SensitivityBound local_sensitivity_bound(const Dataset& x, const Subspace& s,
                                         const OutlierParams& p,
                                         const SearchLimits& limits) {
  const DegreeProfile profile = degree_profile(x, s, p);

  // Centers at data records can flip records of degree exactly k; a center
  // anywhere in the domain can flip records of degree exactly k-1, and the
  // best such center is captured exactly by r-coverability of subsets of
  // V(k-1).
  std::int64_t at_records = 0;
  for (std::int64_t i = 0; i < x.n; ++i) {
    const auto flips = cv_set(x, x.row(i), p.k, profile);
    at_records = std::max<std::int64_t>(
        at_records, static_cast<std::int64_t>(flips.size()));
  }

  const auto level_km1 = candidate_pool(profile, p.k - 1, 0);
  std::int64_t anywhere = 0;
  if (!level_km1.empty()) {
    const auto pool = project_records(x, level_km1, s);
    anywhere = largest_coverable_subset(pool, s.size(), p.r, limits);
  }

  const std::int64_t value =
      std::min<std::int64_t>(x.n, std::max(at_records, anywhere) + 1);
  return {BoundKind::LocalUpper, static_cast<double>(value), x.n, s.size(),
          p.k, p.r, 0.0, 0};
}

SensitivityBound ls_t_bound(const Dataset& x, const Subspace& s,
                            const OutlierParams& p, std::int32_t t,
                            const SearchLimits& limits) {
  if (t < 0) throw ArgumentError("Hamming radius t must be nonnegative");
  std::int64_t value;
  if (t + 1 >= x.n) {
    // max(..) + t + 1 >= N regardless of the pools; the clamp decides.
    value = x.n;
  } else {
    const DegreeProfile profile = degree_profile(x, s, p);
    std::int64_t widest = 0;
    for (std::int64_t center : {static_cast<std::int64_t>(p.k),
                                static_cast<std::int64_t>(p.k) - 1}) {
      const auto pool_indices = candidate_pool(profile, center, t);
      if (pool_indices.empty()) continue;
      const auto pool = project_records(x, pool_indices, s);
      widest = std::max(widest,
                        largest_coverable_subset(pool, s.size(), p.r, limits));
    }
    value = std::min<std::int64_t>(x.n, widest + t + 1);
  }
  SensitivityBound bound{BoundKind::LsTUpper, static_cast<double>(value),
                         x.n,  s.size(),      p.k,
                         p.r,  0.0,           t};
  return bound;
}

namespace {

// Prefix sums over level-set sizes; level sets are disjoint, so the size of
// any union of consecutive levels is a difference of prefix sums.
class LevelSizes {
 public:
  explicit LevelSizes(const DegreeProfile& profile)
      : prefix_(profile.level_sets.size() + 1, 0) {
    for (std::size_t i = 0; i < profile.level_sets.size(); ++i) {
      prefix_[i + 1] =
          prefix_[i] + static_cast<std::int64_t>(profile.level_sets[i].size());
    }
  }

  // |V(center-t) u ... u V(center+t)| with out-of-range degrees empty.
  std::int64_t pool_size(std::int64_t center, std::int64_t t) const {
    if (t < 0) return 0;
    const auto max_deg = static_cast<std::int64_t>(prefix_.size()) - 1;
    const std::int64_t lo = std::clamp<std::int64_t>(center - t, 0, max_deg);
    const std::int64_t hi = std::clamp<std::int64_t>(center + t + 1, 0, max_deg);
    return prefix_[static_cast<std::size_t>(hi)] -
           prefix_[static_cast<std::size_t>(lo)];
  }

 private:
  std::vector<std::int64_t> prefix_;
};

}  // namespace

SensitivityBound smooth_sensitivity_bound(const Dataset& x, const Subspace& s,
                                          const OutlierParams& p,
                                          const SmoothParams& sp,
                                          const SearchLimits& limits) {
  sp.validate();
  const DegreeProfile profile = degree_profile(x, s, p);
  const LevelSizes sizes(profile);
  const std::int64_t n = x.n;
  const std::int64_t k = p.k;
  std::uint64_t budget = limits.node_budget;

  // State from the last evaluated step: upper bounds on the coverable
  // maxima for the pools around k and k-1, used by the tail bound.
  std::int64_t last_t = -1;
  std::int64_t stored_k = 0;
  std::int64_t stored_km1 = 0;

  double running_max = 0.0;

  // Largest possible value of any term with index >= from_t, given the
  // stored step: future pools only grow by whole level sets, whose sizes
  // are known without searching.
  const auto tail_bound = [&](std::int64_t from_t) {
    double bound = 0.0;
    for (std::int64_t tau = from_t; tau <= n; ++tau) {
      const std::int64_t grow_k =
          sizes.pool_size(k, tau) - sizes.pool_size(k, last_t);
      const std::int64_t grow_km1 =
          sizes.pool_size(k - 1, tau) - sizes.pool_size(k - 1, last_t);
      const std::int64_t inner =
          std::max(stored_k + grow_k, stored_km1 + grow_km1) + tau + 1;
      const double term = std::exp(-sp.beta * static_cast<double>(tau)) *
                          static_cast<double>(std::min(n, inner));
      bound = std::max(bound, term);
    }
    return bound;
  };

  for (std::int64_t t = 0; t <= n; ++t) {
    // Early exit: no remaining term can exceed the running maximum. A tie
    // continues one more step.
    if (tail_bound(t) < running_max) break;

    std::int64_t ls_value;
    if (t + 1 >= n) {
      ls_value = n;
      stored_k = sizes.pool_size(k, t);
      stored_km1 = sizes.pool_size(k - 1, t);
    } else {
      // Coverable counts at or above N - t - 1 saturate the clamp, so the
      // search may stop there without changing the term's value.
      const std::int64_t stop_at = n - t - 1;
      std::int64_t used_k = 0;
      std::int64_t used_km1 = 0;
      for (int which = 0; which < 2; ++which) {
        const std::int64_t center = which == 0 ? k : k - 1;
        const auto pool_indices =
            candidate_pool(profile, center, static_cast<std::int32_t>(t));
        std::int64_t used = 0;
        std::int64_t stored = 0;
        if (!pool_indices.empty()) {
          const auto pool = project_records(x, pool_indices, s);
          const LcsOutcome got =
              bounded_lcs(pool, s.size(), p.r, stop_at, budget);
          used = std::min(got.value, stop_at);
          // The tail bound needs a sound upper bound on the coverable
          // maximum; when the search stopped early the pool size stands in.
          stored = got.exact ? got.value
                             : static_cast<std::int64_t>(pool_indices.size());
        }
        if (which == 0) {
          used_k = used;
          stored_k = stored;
        } else {
          used_km1 = used;
          stored_km1 = stored;
        }
      }
      ls_value = std::min<std::int64_t>(n, std::max(used_k, used_km1) + t + 1);
    }

    const double term = std::exp(-sp.beta * static_cast<double>(t)) *
                        static_cast<double>(ls_value);
    running_max = std::max(running_max, term);
    last_t = t;
  }

  SensitivityBound bound{BoundKind::SmoothUpper, running_max, n, s.size(),
                         p.k, p.r, sp.beta, 0};
  return bound;
}

}  // namespace dpo
