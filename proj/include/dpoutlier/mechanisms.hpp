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

#ifndef DPOUTLIER_MECHANISMS_HPP
#define DPOUTLIER_MECHANISMS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dpoutlier/dataset.hpp"
#include "dpoutlier/rng.hpp"
#include "dpoutlier/sensitivity.hpp"

namespace dpo {

struct PrivacyParams {
  double epsilon = 0.0;   // > 0
  double delta = 0.0;     // in (0, 1)
  std::int32_t p = 1;     // output dimension; 1 for counts

  void validate() const;
};

// Smooth-sensitivity Gaussian calibration constants:
//   alpha = epsilon / (5 * sqrt(2 * ln(2/delta)))
//   beta  = epsilon / (4 * (p + ln(2/delta)))
double smooth_alpha(const PrivacyParams& pp);
double smooth_beta(const PrivacyParams& pp);

enum class NoiseSource { Global, Smooth };

struct NoiseScale {
  double sigma = 0.0;  // standard deviation of the additive noise
  NoiseSource source = NoiseSource::Global;
  double alpha = 0.0;  // smooth only
  double beta = 0.0;   // smooth only
};

struct NoisyRelease {
  double value = 0.0;
  NoiseScale scale;
};

// count + Y with Y ~ N(0, gs_upper^2 * 2 ln(2/delta) / epsilon^2).
// Deterministic given the seed.
NoisyRelease gaussian_by_global(std::int64_t count, std::int64_t gs_upper,
                                const PrivacyParams& pp, std::uint64_t seed);

// count + (S / alpha) * Y with Y standard Gaussian, where S is a smooth
// upper bound computed with the beta matching `pp`. A beta mismatch between
// the bound and the privacy parameters is rejected; silently mixing the two
// would void the privacy guarantee.
NoisyRelease gaussian_by_smooth(std::int64_t count,
                                const SensitivityBound& smooth_bound,
                                const PrivacyParams& pp, std::uint64_t seed);

// Selection probabilities proportional to exp(epsilon * utility), computed
// with a max shift so large utility-epsilon products cannot overflow.
std::vector<double> exponential_probabilities(std::span<const double> utilities,
                                              double epsilon);

// Samples an index with probability proportional to exp(epsilon * utility).
std::size_t exponential_choice(std::span<const double> utilities,
                               double epsilon, std::uint64_t seed);
// Stream variant for callers drawing many samples in a loop.
std::size_t exponential_choice(std::span<const double> utilities,
                               double epsilon, RandomStream& rng);

// Outlier count in `s` divided by the global-sensitivity upper bound for
// dimension |s|; its sensitivity as a utility function is at most 1.
double subspace_utility(const Dataset& x, const Subspace& s,
                        const OutlierParams& p,
                        const KissingNumberTable& table);

// Append-only record of privacy expenditures per released answer.
class BudgetLedger {
 public:
  struct Entry {
    std::string description;
    double epsilon = 0.0;
    double delta = 0.0;
    std::string timestamp;  // ISO 8601 UTC
  };

  void record(const std::string& description, double epsilon, double delta);

  double epsilon_total() const { return epsilon_total_; }
  double delta_total() const { return delta_total_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // One JSON object per line: {description, epsilon, delta, timestamp}.
  void export_jsonl(std::ostream& out) const;
  void export_jsonl(const std::string& path) const;

 private:
  std::vector<Entry> entries_;
  double epsilon_total_ = 0.0;
  double delta_total_ = 0.0;
};

// Select h indices without replacement, each round drawing from the not yet
// selected candidates with parameter epsilon / h. Distributionally this
// matches rejection sampling over the full candidate set with repeats
// discarded, but runs in bounded time.
std::vector<std::size_t> top_h_select(std::span<const double> utilities,
                                      std::int32_t h, double epsilon,
                                      std::uint64_t seed);

// Top-h subspace discovery. The ledger entry records 2 * epsilon: each of
// the h rounds at epsilon/h is a 2*(epsilon/h)*delta_u release with
// delta_u <= 1, and this accounting keeps the conservative factor of two
// rather than the tighter claim sometimes attached to this construction.
// The exponential mechanism spends no delta.
std::vector<Subspace> top_h_subspaces(const Dataset& x,
                                      const std::vector<Subspace>& candidates,
                                      const OutlierParams& p, std::int32_t h,
                                      double epsilon,
                                      const KissingNumberTable& table,
                                      std::uint64_t seed,
                                      BudgetLedger* ledger = nullptr);

}  // namespace dpo

#endif  // DPOUTLIER_MECHANISMS_HPP
