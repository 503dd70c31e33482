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

#include "dpoutlier/seb.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numeric>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/rng.hpp"

namespace dpo {

namespace {

// Incremental support basis for the move-to-front smallest enclosing ball
// solver. Each pushed point extends an orthogonalized coordinate frame
// anchored at the first support point; a push is rejected (returns false)
// when the candidate is affinely dependent on the current support, which
// also covers coincident points.
class SupportBasis {
 public:
  SupportBasis(std::int32_t dim)
      : dim_(dim),
        q0_(dim),
        centers_(static_cast<std::size_t>(dim) + 1,
                 std::vector<double>(dim, 0.0)),
        sqr_radii_(static_cast<std::size_t>(dim) + 1, 0.0),
        dirs_(static_cast<std::size_t>(dim) + 1, std::vector<double>(dim, 0.0)),
        z_(static_cast<std::size_t>(dim) + 1, 0.0),
        current_center_(dim, 0.0) {}

  std::int32_t size() const { return fsize_; }

  double excess(std::span<const double> p) const {
    double e = -current_sqr_radius_;
    for (std::int32_t i = 0; i < dim_; ++i) {
      const double diff = p[static_cast<std::size_t>(i)] - current_center_[static_cast<std::size_t>(i)];
      e += diff * diff;
    }
    return e;
  }

  bool push(std::span<const double> p) {
    constexpr double kRankEps = 1e-32;
    const auto f = static_cast<std::size_t>(fsize_);
    if (fsize_ == 0) {
      for (std::int32_t i = 0; i < dim_; ++i) {
        q0_[i] = p[static_cast<std::size_t>(i)];
        centers_[0][i] = q0_[i];
      }
      sqr_radii_[0] = 0.0;
    } else {
      for (std::int32_t i = 0; i < dim_; ++i) {
        dirs_[f][i] = p[static_cast<std::size_t>(i)] - q0_[i];
      }
      for (std::size_t j = 1; j < f; ++j) {
        double a = 0.0;
        for (std::int32_t i = 0; i < dim_; ++i) a += dirs_[j][i] * dirs_[f][i];
        a *= 2.0 / z_[j];
        for (std::int32_t i = 0; i < dim_; ++i) dirs_[f][i] -= a * dirs_[j][i];
      }
      double z = 0.0;
      for (std::int32_t i = 0; i < dim_; ++i) z += dirs_[f][i] * dirs_[f][i];
      z *= 2.0;
      if (z < kRankEps * sqr_radii_[f - 1]) return false;
      z_[f] = z;

      double e = -sqr_radii_[f - 1];
      for (std::int32_t i = 0; i < dim_; ++i) {
        const double diff = p[static_cast<std::size_t>(i)] - centers_[f - 1][i];
        e += diff * diff;
      }
      const double scale = e / z;
      for (std::int32_t i = 0; i < dim_; ++i) {
        centers_[f][i] = centers_[f - 1][i] + scale * dirs_[f][i];
      }
      sqr_radii_[f] = sqr_radii_[f - 1] + e * scale / 2.0;
    }
    // The current ball survives pop(): once a deeper recursion has grown
    // the ball with this point on its boundary, the enclosing ball of the
    // already-scanned prefix stays valid for the remaining scan.
    current_center_ = centers_[f];
    current_sqr_radius_ = sqr_radii_[f];
    ++fsize_;
    return true;
  }

  void pop() { --fsize_; }

  const std::vector<double>& current_center() const { return current_center_; }

  double current_sqr_radius() const { return current_sqr_radius_; }

 private:
  std::int32_t dim_;
  std::int32_t fsize_ = 0;  // number of support points currently pushed
  std::vector<double> q0_;
  std::vector<std::vector<double>> centers_;
  std::vector<double> sqr_radii_;
  std::vector<std::vector<double>> dirs_;
  std::vector<double> z_;
  std::vector<double> current_center_;
  double current_sqr_radius_ = -1.0;
};

class MtfSolver {
 public:
  MtfSolver(std::span<const double> points, std::int32_t dim)
      : points_(points), dim_(dim), basis_(dim) {}

  Ball solve(std::uint64_t seed) {
    const auto n = static_cast<std::int64_t>(points_.size()) / dim_;
    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    RandomStream rng(seed);
    for (std::int64_t i = n - 1; i > 0; --i) {
      std::swap(order[static_cast<std::size_t>(i)],
                order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    list_.assign(order.begin(), order.end());
    mtf(list_.end());

    Ball ball;
    ball.center = basis_.current_center();
    ball.radius = std::sqrt(std::max(0.0, basis_.current_sqr_radius()));
    return ball;
  }

 private:
  std::span<const double> point(std::int64_t i) const {
    return {points_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  void mtf(std::list<std::int64_t>::iterator end) {
    if (basis_.size() == dim_ + 1) return;
    for (auto it = list_.begin(); it != end;) {
      auto cur = it++;
      if (basis_.excess(point(*cur)) > 0.0) {
        if (basis_.push(point(*cur))) {
          mtf(cur);
          basis_.pop();
          list_.splice(list_.begin(), list_, cur);
        }
      }
    }
  }

  std::span<const double> points_;
  std::int32_t dim_;
  SupportBasis basis_;
  std::list<std::int64_t> list_;
};

}  // namespace

Ball smallest_enclosing_ball(std::span<const double> points, std::int32_t dim,
                             std::uint64_t seed) {
  if (dim < 1) throw ArgumentError("point dimension must be at least 1");
  if (points.empty() || points.size() % static_cast<std::size_t>(dim) != 0) {
    throw ArgumentError("point buffer must hold a nonempty n x dim matrix");
  }
  return MtfSolver(points, dim).solve(seed);
}

bool is_coverable(std::span<const double> points, std::int32_t dim, double r,
                  double tol) {
  if (!(r > 0.0)) throw ArgumentError("coverability radius must be positive");
  return smallest_enclosing_ball(points, dim).radius <= r + tol;
}

}  // namespace dpo
