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

#ifndef DPOUTLIER_SEB_HPP
#define DPOUTLIER_SEB_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace dpo {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

// Additive slack used when comparing an enclosing-ball radius against the
// query radius; data is standardized to unit scale, so an absolute tolerance
// is appropriate at the boundary where touching spheres occur.
inline constexpr double kCoverTolerance = 1e-9;

inline constexpr std::uint64_t kDefaultSebSeed = 0x5eb5eb5eb5eb5ebULL;

// Exact smallest enclosing ball of `points` (n x dim, row-major flat).
// Randomized move-to-front solver with an incremental support basis; the
// shuffle seed is injectable for reproducibility. Coincident and affinely
// dependent points are handled by rank checks in the basis update.
Ball smallest_enclosing_ball(std::span<const double> points, std::int32_t dim,
                             std::uint64_t seed = kDefaultSebSeed);

// True iff the smallest enclosing ball of `points` has radius <= r + tol.
bool is_coverable(std::span<const double> points, std::int32_t dim, double r,
                  double tol = kCoverTolerance);

}  // namespace dpo

#endif  // DPOUTLIER_SEB_HPP
