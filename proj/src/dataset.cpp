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

#include "dpoutlier/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpoutlier/errors.hpp"

namespace dpo {

Dataset Dataset::create(std::vector<double> values, std::int64_t n,
                        std::int32_t d, std::optional<std::vector<Label>> labels,
                        std::string name) {
  if (n < 1) throw ArgumentError("dataset must contain at least one record");
  if (d < 1) throw ArgumentError("dataset dimension must be at least 1");
  if (static_cast<std::int64_t>(values.size()) != n * d) {
    std::ostringstream msg;
    msg << "value buffer holds " << values.size() << " numbers, expected "
        << n * d << " (" << n << " records x " << d << " attributes)";
    throw ArgumentError(msg.str());
  }
  if (labels && static_cast<std::int64_t>(labels->size()) != n) {
    throw ArgumentError("label count does not match record count");
  }
  Dataset out;
  out.values = std::move(values);
  out.n = n;
  out.d = d;
  out.labels = std::move(labels);
  out.name = std::move(name);
  return out;
}

Subspace::Subspace(std::vector<std::int32_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ArgumentError("subspace must be nonempty");
  std::sort(dims_.begin(), dims_.end());
  if (std::adjacent_find(dims_.begin(), dims_.end()) != dims_.end()) {
    throw ArgumentError("subspace contains duplicate attribute indices");
  }
  if (dims_.front() < 1) {
    throw ArgumentError("subspace attribute indices are 1-based");
  }
}

Subspace Subspace::full(std::int32_t d) {
  std::vector<std::int32_t> dims(static_cast<std::size_t>(d));
  for (std::int32_t i = 0; i < d; ++i) dims[i] = i + 1;
  return Subspace(std::move(dims));
}

void Subspace::check_within(std::int32_t data_dim) const {
  if (dims_.back() > data_dim) {
    std::ostringstream msg;
    msg << "subspace attribute " << dims_.back()
        << " exceeds data dimension " << data_dim;
    throw DimensionError(msg.str());
  }
}

std::string Subspace::to_string() const {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out << ",";
    out << dims_[i];
  }
  out << "}";
  return out.str();
}

void OutlierParams::validate() const {
  if (k < 1) throw ArgumentError("neighbor threshold k must be at least 1");
  if (!(r > 0.0)) throw ArgumentError("radius r must be positive");
}

std::span<const std::int32_t> DegreeProfile::level_set(
    std::int64_t degree) const {
  if (degree < 0 || degree >= static_cast<std::int64_t>(level_sets.size())) {
    return {};
  }
  const auto& s = level_sets[static_cast<std::size_t>(degree)];
  return {s.data(), s.size()};
}

namespace {

// Squared projected distance times |S|; comparisons against r use
// dist2 <= r^2 * |S| so the boundary case "distance exactly r" stays exact
// whenever coordinates and r are exactly representable.
double projected_sq_dist(std::span<const double> a, std::span<const double> b,
                         const Subspace& s) {
  double acc = 0.0;
  for (std::int32_t idx : s.dims()) {
    const double diff = a[static_cast<std::size_t>(idx - 1)] -
                        b[static_cast<std::size_t>(idx - 1)];
    acc += diff * diff;
  }
  return acc;
}

void check_vector_dims(std::span<const double> a, std::span<const double> b,
                       const Subspace& s) {
  const auto need = static_cast<std::size_t>(s.dims().back());
  if (a.size() < need || b.size() < need) {
    std::ostringstream msg;
    msg << "vector dimension too small for subspace attribute "
        << s.dims().back();
    throw DimensionError(msg.str());
  }
}

}  // namespace

double subspace_distance(std::span<const double> a, std::span<const double> b,
                         const Subspace& s) {
  check_vector_dims(a, b, s);
  return std::sqrt(projected_sq_dist(a, b, s) / s.size());
}

bool within_radius(std::span<const double> a, std::span<const double> b,
                   const Subspace& s, double r) {
  check_vector_dims(a, b, s);
  return projected_sq_dist(a, b, s) <= r * r * s.size();
}

DegreeProfile degree_profile(const Dataset& x, const Subspace& s,
                             const OutlierParams& p) {
  p.validate();
  s.check_within(x.d);

  const std::int64_t n = x.n;
  std::vector<std::int32_t> degrees(static_cast<std::size_t>(n), 0);
  const double threshold = p.r * p.r * s.size();

  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      if (projected_sq_dist(x.row(i), x.row(j), s) <= threshold) {
        ++degrees[static_cast<std::size_t>(i)];
        ++degrees[static_cast<std::size_t>(j)];
      }
    }
  }

  DegreeProfile profile{std::move(degrees),
                        std::vector<std::vector<std::int32_t>>(
                            static_cast<std::size_t>(n)),
                        s, p};
  for (std::int64_t i = 0; i < n; ++i) {
    profile.level_sets[static_cast<std::size_t>(
        profile.degrees[static_cast<std::size_t>(i)])]
        .push_back(static_cast<std::int32_t>(i));
  }
  return profile;
}

std::int64_t count_outliers(const DegreeProfile& profile) {
  std::int64_t count = 0;
  for (std::int32_t deg : profile.degrees) {
    if (deg < profile.params.k) ++count;
  }
  return count;
}

std::int64_t count_outliers(const Dataset& x, const Subspace& s,
                            const OutlierParams& p) {
  return count_outliers(degree_profile(x, s, p));
}

std::vector<std::int32_t> outlier_indices(const DegreeProfile& profile) {
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < profile.degrees.size(); ++i) {
    if (profile.degrees[i] < profile.params.k) {
      out.push_back(static_cast<std::int32_t>(i));
    }
  }
  return out;
}

std::vector<std::pair<Subspace, std::int64_t>> rank_subspaces(
    const Dataset& x, const std::vector<Subspace>& candidates,
    const OutlierParams& p) {
  if (candidates.empty()) {
    throw ArgumentError("candidate subspace set must be nonempty");
  }
  std::vector<std::pair<Subspace, std::int64_t>> ranked;
  ranked.reserve(candidates.size());
  for (const Subspace& s : candidates) {
    ranked.emplace_back(s, count_outliers(x, s, p));
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return ranked;
}

std::vector<Subspace> subspace_family(std::int32_t d, std::int32_t c) {
  if (c < 1 || c > d) {
    throw ArgumentError("subspace family size must satisfy 1 <= c <= d");
  }
  std::vector<Subspace> family;
  std::vector<std::int32_t> combo(static_cast<std::size_t>(c));
  for (std::int32_t i = 0; i < c; ++i) combo[i] = i + 1;
  while (true) {
    family.emplace_back(combo);
    std::int32_t pos = c - 1;
    while (pos >= 0 && combo[pos] == d - (c - 1 - pos)) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (std::int32_t j = pos + 1; j < c; ++j) combo[j] = combo[j - 1] + 1;
  }
  return family;
}

}  // namespace dpo
