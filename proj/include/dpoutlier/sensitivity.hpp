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

#ifndef DPOUTLIER_SENSITIVITY_HPP
#define DPOUTLIER_SENSITIVITY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpoutlier/dataset.hpp"

namespace dpo {

// Published upper bounds on the kissing number K_d, keyed by dimension, with
// a citation per entry. Unsupported dimensions are an error, never a guess.
class KissingNumberTable {
 public:
  struct Entry {
    std::int32_t dim;
    std::int64_t upper;
    std::string citation;
  };

  // The bundled table (dimensions 1..34); identical content ships as a
  // plain-text data file.
  static const KissingNumberTable& embedded_default();

  // Parses "<d> <K_d_upper> <citation-key>" lines; '#' starts a comment.
  static KissingNumberTable parse(const std::string& text);
  static KissingNumberTable load(const std::string& path);

  std::int64_t upper_bound(std::int32_t d) const;  // throws DimensionError
  bool has(std::int32_t d) const;
  std::int32_t max_dim() const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;  // sorted by dim
};

enum class BoundKind {
  GlobalLower,
  GlobalUpper,
  LocalUpper,
  LsTUpper,
  SmoothUpper,
};

// A named, provenance-tagged sensitivity scalar together with the query
// parameters it was computed for.
struct SensitivityBound {
  BoundKind kind;
  double value = 0.0;
  std::int64_t n = 0;
  std::int32_t dim = 0;  // |S| of the active subspace
  std::int32_t k = 0;
  double r = 0.0;
  double beta = 0.0;  // smoothing rate (SmoothUpper only)
  std::int32_t t = 0;  // Hamming-radius parameter (LsTUpper only)
};

struct SmoothParams {
  double beta = 0.0;  // > 0

  void validate() const;
};

// Caps on the exponential coverable-subset search. `pool_cap` bounds the
// pool size accepted by largest_coverable_subset (the search is O(2^|P|)
// enclosing-ball evaluations); `node_budget` bounds the number of search
// nodes the smooth-sensitivity loop may spend in total.
struct SearchLimits {
  std::int32_t pool_cap = 24;
  std::uint64_t node_budget = std::uint64_t{1} << 24;
};

// Global sensitivity bounds for counting outliers:
//   lower = min(N, 2dk + 1),  upper = min(N, k * K_d + 1).
std::pair<std::int64_t, std::int64_t> global_sensitivity_bounds(
    std::int64_t n, std::int32_t d, std::int32_t k,
    const KissingNumberTable& table);

// Records of degree exactly `degree` lying within distance r of `center`
// under the profile's subspace metric.
std::vector<std::int32_t> cv_set(const Dataset& x,
                                 std::span<const double> center,
                                 std::int64_t degree,
                                 const DegreeProfile& profile);

// Union of the level sets V(k + i) for i in [-t, t]; degrees outside
// [0, N-1] contribute nothing. Returns record indices in ascending order.
std::vector<std::int32_t> candidate_pool(const DegreeProfile& profile,
                                         std::int64_t k, std::int32_t t);

// Size of the largest subset of `pool` (n x dim flat) whose smallest
// enclosing ball has radius <= r (+ tolerance). Recursive include/exclude
// search; a branch is abandoned as soon as its chosen subset stops being
// coverable, which is sound because the enclosing-ball radius is monotone
// under set inclusion. Pools above limits.pool_cap raise a resource error.
std::int64_t largest_coverable_subset(std::span<const double> pool,
                                      std::int32_t dim, double r,
                                      const SearchLimits& limits = {});

// Upper bound on the local sensitivity of the outlier count:
//   max{ max over records of |CV(record, k)|, largest coverable subset of
//        V(k-1) } + 1, clamped to N.
SensitivityBound local_sensitivity_bound(const Dataset& x, const Subspace& s,
                                         const OutlierParams& p,
                                         const SearchLimits& limits = {});

// Upper bound on the local sensitivity at Hamming radius t:
//   max over the level-set pools around k and k-1 of the largest coverable
//   subset, + t + 1, clamped to N.
SensitivityBound ls_t_bound(const Dataset& x, const Subspace& s,
                            const OutlierParams& p, std::int32_t t,
                            const SearchLimits& limits = {});

// Smooth upper bound on the local sensitivity:
//   max over t in [0, N] of e^(-t*beta) * ls_t_bound(t),
// evaluated with an early exit once a tail bound on all remaining terms
// drops below the running maximum (a tie continues one more step). The
// result is identical to the unpruned loop.
SensitivityBound smooth_sensitivity_bound(const Dataset& x, const Subspace& s,
                                          const OutlierParams& p,
                                          const SmoothParams& sp,
                                          const SearchLimits& limits = {});

}  // namespace dpo

#endif  // DPOUTLIER_SENSITIVITY_HPP
