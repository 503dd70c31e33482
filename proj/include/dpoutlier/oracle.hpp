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

// Brute-force reference implementations used to validate the optimized
// algorithms. They deliberately share no code with the paths they check:
// subset maxima come from full enumeration and sensitivities from explicit
// record moves over a finite grid surrogate of the data domain.

#ifndef DPOUTLIER_ORACLE_HPP
#define DPOUTLIER_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dpoutlier/dataset.hpp"
#include "dpoutlier/rng.hpp"
#include "dpoutlier/sensitivity.hpp"

namespace dpo::oracle {

// Finite surrogate of the continuous data domain for exhaustive checks:
// `levels` evenly spaced values per attribute on [lo, hi].
struct GridDomain {
  std::int32_t dim = 0;
  std::int32_t levels = 0;
  double lo = 0.0;
  double hi = 0.0;

  void validate() const;  // >= 2 levels, total cells <= 10^4
  std::int64_t cell_count() const;
  // Cell coordinates in row-major order over the level grid.
  std::vector<double> cell(std::int64_t index) const;
};

// Exhaustive maximum over all 2^|pool| subsets of the coverability test.
// Pools above 20 points are refused.
std::int64_t brute_coverable(std::span<const double> pool, std::int32_t dim,
                             double r);

// Smallest enclosing ball radius by enumerating candidate support subsets
// of size <= dim + 1 and solving each circumscribing ball directly.
// Independent of the incremental solver. Requires n <= 12.
double brute_seb_radius(std::span<const double> points, std::int32_t dim);

// Exact local sensitivity of the outlier count on a grid domain: the
// maximum count change over every single-record replacement to every grid
// cell. Requires N <= 8.
std::int64_t brute_local_sensitivity(const Dataset& x, const GridDomain& grid,
                                     const Subspace& s,
                                     const OutlierParams& p);

// Unpruned smooth bound: max over all t in [0, N] of
// e^(-t*beta) * ls_t_bound(t). Requires N <= 15.
double brute_smooth_bound(const Dataset& x, const Subspace& s,
                          const OutlierParams& p, const SmoothParams& sp,
                          const SearchLimits& limits = {});

// Empirical per-outcome probability ratios for a discrete mechanism run on
// two (neighbor) inputs.
struct DpCheckRow {
  std::size_t candidate = 0;
  double p_x = 0.0;
  double p_x_prime = 0.0;
  double ratio = 0.0;        // p_x / p_x_prime
  double ratio_se = 0.0;     // delta-method standard error of the ratio
};

struct DpCheckResult {
  std::vector<DpCheckRow> rows;
  double max_log_ratio = 0.0;
  bool insufficient_draws = false;  // some outcome too rare to estimate

  // True iff every ratio is within exp(bound_log) plus `se_slack` standard
  // errors.
  bool within(double bound_log, double se_slack) const;
};

// Draws `draws` samples of the given mechanism on each input and compares
// per-candidate frequencies. `mechanism` maps a random stream to a chosen
// candidate index.
DpCheckResult empirical_dp_check(
    const std::function<std::size_t(RandomStream&)>& on_x,
    const std::function<std::size_t(RandomStream&)>& on_x_prime,
    std::size_t candidate_count, std::int64_t draws, std::uint64_t seed);

}  // namespace dpo::oracle

#endif  // DPOUTLIER_ORACLE_HPP
