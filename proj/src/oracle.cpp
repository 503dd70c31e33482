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

#include "dpoutlier/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/seb.hpp"

namespace dpo::oracle {

void GridDomain::validate() const {
  if (dim < 1) throw ArgumentError("grid dimension must be >= 1");
  if (levels < 2) throw ArgumentError("grid needs at least 2 levels per attribute");
  if (!(hi > lo)) throw ArgumentError("grid bounds must satisfy lo < hi");
  if (cell_count() > 10000) {
    throw ResourceLimitError("grid domain exceeds 10^4 cells");
  }
}

std::int64_t GridDomain::cell_count() const {
  std::int64_t total = 1;
  for (std::int32_t i = 0; i < dim; ++i) {
    if (total > 10000) return total;  // saturate; validate() rejects
    total *= levels;
  }
  return total;
}

std::vector<double> GridDomain::cell(std::int64_t index) const {
  std::vector<double> out(static_cast<std::size_t>(dim));
  const double step = (hi - lo) / (levels - 1);
  for (std::int32_t c = 0; c < dim; ++c) {
    out[static_cast<std::size_t>(c)] =
        lo + step * static_cast<double>(index % levels);
    index /= levels;
  }
  return out;
}

std::int64_t brute_coverable(std::span<const double> pool, std::int32_t dim,
                             double r) {
  if (dim < 1) throw ArgumentError("pool dimension must be >= 1");
  if (pool.size() % static_cast<std::size_t>(dim) != 0) {
    throw ArgumentError("pool buffer must hold an n x dim matrix");
  }
  const auto n = static_cast<std::int64_t>(pool.size()) / dim;
  if (n == 0) return 0;
  if (n > 20) {
    throw ResourceLimitError("brute_coverable refuses pools above 20 points");
  }

  std::int64_t best = 0;
  std::vector<double> subset;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    if (size <= best) continue;
    subset.clear();
    for (std::int64_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        subset.insert(subset.end(), pool.begin() + i * dim,
                      pool.begin() + (i + 1) * dim);
      }
    }
    if (is_coverable(subset, dim, r)) best = size;
  }
  return best;
}

namespace {

// Circumscribing ball of an affinely independent point subset: solves the
// Gram system 2 * G * lambda = b for the center within the subset's affine
// hull by Gaussian elimination with partial pivoting. Returns false when
// the subset is (near) affinely dependent.
bool circumball(std::span<const double> points, std::int32_t dim,
                std::span<const std::int64_t> subset,
                std::vector<double>& center, double& radius) {
  const auto m = static_cast<std::int64_t>(subset.size());
  const auto p0 = subset[0];
  const auto point = [&](std::int64_t i) {
    return points.subspan(static_cast<std::size_t>(subset[static_cast<std::size_t>(i)]) *
                              static_cast<std::size_t>(dim),
                          static_cast<std::size_t>(dim));
  };

  const std::int64_t rows = m - 1;
  std::vector<std::vector<double>> v(static_cast<std::size_t>(rows),
                                     std::vector<double>(dim));
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int32_t c = 0; c < dim; ++c) {
      v[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
          point(i + 1)[static_cast<std::size_t>(c)] -
          points[static_cast<std::size_t>(p0 * dim + c)];
    }
  }

  // G lambda = rhs with G_ij = v_i . v_j, rhs_i = |v_i|^2 / 2
  std::vector<std::vector<double>> g(static_cast<std::size_t>(rows),
                                     std::vector<double>(static_cast<std::size_t>(rows) + 1));
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < rows; ++j) {
      double dot = 0.0;
      for (std::int32_t c = 0; c < dim; ++c) {
        dot += v[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
               v[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
      }
      g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dot;
    }
    g[static_cast<std::size_t>(i)][static_cast<std::size_t>(rows)] =
        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] / 2.0;
  }

  for (std::int64_t col = 0; col < rows; ++col) {
    std::int64_t pivot = col;
    for (std::int64_t row = col + 1; row < rows; ++row) {
      if (std::abs(g[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]) >
          std::abs(g[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)])) {
        pivot = row;
      }
    }
    if (std::abs(g[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-12) {
      return false;
    }
    std::swap(g[static_cast<std::size_t>(col)], g[static_cast<std::size_t>(pivot)]);
    for (std::int64_t row = col + 1; row < rows; ++row) {
      const double factor =
          g[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] /
          g[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (std::int64_t c2 = col; c2 <= rows; ++c2) {
        g[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] -=
            factor * g[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
      }
    }
  }
  std::vector<double> lambda(static_cast<std::size_t>(rows), 0.0);
  for (std::int64_t row = rows - 1; row >= 0; --row) {
    double acc = g[static_cast<std::size_t>(row)][static_cast<std::size_t>(rows)];
    for (std::int64_t c2 = row + 1; c2 < rows; ++c2) {
      acc -= g[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] *
             lambda[static_cast<std::size_t>(c2)];
    }
    lambda[static_cast<std::size_t>(row)] =
        acc / g[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)];
  }

  center.assign(static_cast<std::size_t>(dim), 0.0);
  for (std::int32_t c = 0; c < dim; ++c) {
    double acc = points[static_cast<std::size_t>(p0 * dim + c)];
    for (std::int64_t i = 0; i < rows; ++i) {
      acc += lambda[static_cast<std::size_t>(i)] *
             v[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    center[static_cast<std::size_t>(c)] = acc;
  }
  double r2 = 0.0;
  for (std::int32_t c = 0; c < dim; ++c) {
    const double diff =
        center[static_cast<std::size_t>(c)] - points[static_cast<std::size_t>(p0 * dim + c)];
    r2 += diff * diff;
  }
  radius = std::sqrt(r2);
  return true;
}

}  // namespace

double brute_seb_radius(std::span<const double> points, std::int32_t dim) {
  if (dim < 1) throw ArgumentError("point dimension must be >= 1");
  const auto n = static_cast<std::int64_t>(points.size()) / dim;
  if (n == 0 || points.size() % static_cast<std::size_t>(dim) != 0) {
    throw ArgumentError("point buffer must hold a nonempty n x dim matrix");
  }
  if (n > 12) {
    throw ResourceLimitError("brute_seb_radius refuses more than 12 points");
  }

  const double slack = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> subset;
  std::vector<double> center;

  // Enumerate candidate support subsets of size 1..dim+1; the smallest
  // enclosing ball is the minimal valid circumscribing ball over them.
  const std::int64_t max_support = std::min<std::int64_t>(n, dim + 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    if (size > max_support) continue;
    subset.clear();
    for (std::int64_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(i);
    }
    double radius = 0.0;
    if (subset.size() == 1) {
      center.assign(points.begin() + subset[0] * dim,
                    points.begin() + (subset[0] + 1) * dim);
      radius = 0.0;
    } else if (!circumball(points, dim, subset, center, radius)) {
      continue;
    }
    if (radius >= best) continue;
    bool contains_all = true;
    for (std::int64_t i = 0; i < n && contains_all; ++i) {
      double d2 = 0.0;
      for (std::int32_t c = 0; c < dim; ++c) {
        const double diff = points[static_cast<std::size_t>(i * dim + c)] -
                            center[static_cast<std::size_t>(c)];
        d2 += diff * diff;
      }
      contains_all = std::sqrt(d2) <= radius + slack;
    }
    if (contains_all) best = radius;
  }
  return best;
}

std::int64_t brute_local_sensitivity(const Dataset& x, const GridDomain& grid,
                                     const Subspace& s,
                                     const OutlierParams& p) {
  grid.validate();
  if (x.n > 8) {
    throw ResourceLimitError("brute_local_sensitivity refuses N > 8");
  }
  if (grid.dim != x.d) {
    throw ArgumentError("grid dimension must match the dataset dimension");
  }

  const std::int64_t baseline = count_outliers(x, s, p);
  std::int64_t worst = 0;
  Dataset moved = x;
  const std::int64_t cells = grid.cell_count();
  for (std::int64_t rec = 0; rec < x.n; ++rec) {
    for (std::int64_t cell_idx = 0; cell_idx < cells; ++cell_idx) {
      const std::vector<double> target = grid.cell(cell_idx);
      for (std::int32_t c = 0; c < x.d; ++c) {
        moved.values[static_cast<std::size_t>(rec * x.d + c)] =
            target[static_cast<std::size_t>(c)];
      }
      const std::int64_t count = count_outliers(moved, s, p);
      worst = std::max(worst, std::abs(count - baseline));
    }
    // restore the record
    for (std::int32_t c = 0; c < x.d; ++c) {
      moved.values[static_cast<std::size_t>(rec * x.d + c)] =
          x.values[static_cast<std::size_t>(rec * x.d + c)];
    }
  }
  return worst;
}

double brute_smooth_bound(const Dataset& x, const Subspace& s,
                          const OutlierParams& p, const SmoothParams& sp,
                          const SearchLimits& limits) {
  sp.validate();
  if (x.n > 15) {
    throw ResourceLimitError("brute_smooth_bound refuses N > 15");
  }
  double best = 0.0;
  for (std::int64_t t = 0; t <= x.n; ++t) {
    const SensitivityBound bound =
        ls_t_bound(x, s, p, static_cast<std::int32_t>(t), limits);
    const double term =
        std::exp(-sp.beta * static_cast<double>(t)) * bound.value;
    best = std::max(best, term);
  }
  return best;
}

bool DpCheckResult::within(double bound_log, double se_slack) const {
  const double bound = std::exp(bound_log);
  for (const DpCheckRow& row : rows) {
    if (row.ratio > bound + se_slack * row.ratio_se) return false;
  }
  return true;
}

DpCheckResult empirical_dp_check(
    const std::function<std::size_t(RandomStream&)>& on_x,
    const std::function<std::size_t(RandomStream&)>& on_x_prime,
    std::size_t candidate_count, std::int64_t draws, std::uint64_t seed) {
  if (candidate_count == 0) throw ArgumentError("need at least one candidate");
  if (draws < 1) throw ArgumentError("need at least one draw");

  std::vector<std::int64_t> hits_x(candidate_count, 0);
  std::vector<std::int64_t> hits_xp(candidate_count, 0);
  RandomStream rng_x(derive_seed(seed, 0xA));
  RandomStream rng_xp(derive_seed(seed, 0xB));
  for (std::int64_t i = 0; i < draws; ++i) {
    ++hits_x[on_x(rng_x)];
    ++hits_xp[on_x_prime(rng_xp)];
  }

  DpCheckResult result;
  const double total = static_cast<double>(draws);
  for (std::size_t c = 0; c < candidate_count; ++c) {
    DpCheckRow row;
    row.candidate = c;
    row.p_x = static_cast<double>(hits_x[c]) / total;
    row.p_x_prime = static_cast<double>(hits_xp[c]) / total;
    if (hits_xp[c] < 10 || hits_x[c] < 10) {
      // Too rare on either side for a stable ratio estimate.
      result.insufficient_draws = true;
      continue;
    }
    row.ratio = row.p_x / row.p_x_prime;
    const double rel_var_x = (1.0 - row.p_x) / (row.p_x * total);
    const double rel_var_xp = (1.0 - row.p_x_prime) / (row.p_x_prime * total);
    row.ratio_se = row.ratio * std::sqrt(rel_var_x + rel_var_xp);
    result.max_log_ratio =
        std::max(result.max_log_ratio, std::log(row.ratio));
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace dpo::oracle
