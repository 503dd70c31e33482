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

#ifndef DPOUTLIER_DATASET_HPP
#define DPOUTLIER_DATASET_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dpo {

enum class Label : std::uint8_t { Inlier = 0, Outlier = 1 };

// An ordered collection of N real vectors of dimension d, optionally with
// ground-truth inlier/outlier labels. Values are stored row-major.
struct Dataset {
  std::vector<double> values;  // N x d, row-major
  std::int64_t n = 0;
  std::int32_t d = 0;
  std::optional<std::vector<Label>> labels;
  std::string name;

  std::span<const double> row(std::int64_t i) const {
    return {values.data() + i * d, static_cast<std::size_t>(d)};
  }

  // Validates shape invariants (n >= 1, d >= 1, value count, label count).
  static Dataset create(std::vector<double> values, std::int64_t n,
                        std::int32_t d,
                        std::optional<std::vector<Label>> labels = std::nullopt,
                        std::string name = {});
};

// A nonempty duplicate-free set of 1-based attribute indices defining a
// projected metric.
class Subspace {
 public:
  explicit Subspace(std::vector<std::int32_t> dims);
  static Subspace full(std::int32_t d);

  const std::vector<std::int32_t>& dims() const { return dims_; }
  std::int32_t size() const { return static_cast<std::int32_t>(dims_.size()); }

  // Throws DimensionError if any index exceeds the data dimension.
  void check_within(std::int32_t data_dim) const;

  bool operator==(const Subspace& other) const { return dims_ == other.dims_; }
  // Lexicographic order on attribute indices; the deterministic tie-breaker.
  bool operator<(const Subspace& other) const { return dims_ < other.dims_; }

  std::string to_string() const;

 private:
  std::vector<std::int32_t> dims_;  // ascending, unique, 1-based
};

struct OutlierParams {
  std::int32_t k = 1;  // neighbor threshold, >= 1
  double r = 1.0;      // radius, > 0

  void validate() const;
};

// Per-record neighbor counts plus the degree level sets V(k) for a fixed
// radius, remembering the subspace and parameters they were computed under.
struct DegreeProfile {
  std::vector<std::int32_t> degrees;            // degrees[i] in [0, N-1]
  std::vector<std::vector<std::int32_t>> level_sets;  // level_sets[k] = {i : degrees[i] == k}
  Subspace subspace;
  OutlierParams params;

  std::int64_t n() const { return static_cast<std::int64_t>(degrees.size()); }

  // Indices of records with degree exactly `degree`; empty for any degree
  // outside [0, N-1].
  std::span<const std::int32_t> level_set(std::int64_t degree) const;
};

// |S|-normalized Euclidean distance between the projections of a and b.
double subspace_distance(std::span<const double> a, std::span<const double> b,
                         const Subspace& s);

// True iff dist_S(a, b) <= r, evaluated on squared quantities so the
// boundary case "distance exactly r" is decided without square-root
// rounding.
bool within_radius(std::span<const double> a, std::span<const double> b,
                   const Subspace& s, double r);

// Neighbor counts under the convention that distance exactly r counts as a
// neighbor. Exact O(N^2) pairwise computation.
DegreeProfile degree_profile(const Dataset& x, const Subspace& s,
                             const OutlierParams& p);

// Number of records with fewer than k neighbors within radius r.
std::int64_t count_outliers(const Dataset& x, const Subspace& s,
                            const OutlierParams& p);
std::int64_t count_outliers(const DegreeProfile& profile);

// Record indices flagged as outliers (degree < k).
std::vector<std::int32_t> outlier_indices(const DegreeProfile& profile);

// Candidates sorted by outlier count descending, ties broken by lexicographic
// order of the attribute indices.
std::vector<std::pair<Subspace, std::int64_t>> rank_subspaces(
    const Dataset& x, const std::vector<Subspace>& candidates,
    const OutlierParams& p);

// All c-element subsets of {1..d} in lexicographic order.
std::vector<Subspace> subspace_family(std::int32_t d, std::int32_t c);

}  // namespace dpo

#endif  // DPOUTLIER_DATASET_HPP
