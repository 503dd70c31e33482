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

#include "dpoutlier/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dpoutlier/errors.hpp"

namespace dpo {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ArgumentError("delta must lie strictly between 0 and 1");
  }
  if (p < 1) throw ArgumentError("output dimension p must be at least 1");
}

double smooth_alpha(const PrivacyParams& pp) {
  pp.validate();
  return pp.epsilon / (5.0 * std::sqrt(2.0 * std::log(2.0 / pp.delta)));
}

double smooth_beta(const PrivacyParams& pp) {
  pp.validate();
  return pp.epsilon / (4.0 * (pp.p + std::log(2.0 / pp.delta)));
}

NoisyRelease gaussian_by_global(std::int64_t count, std::int64_t gs_upper,
                                const PrivacyParams& pp, std::uint64_t seed) {
  pp.validate();
  if (gs_upper < 1) {
    throw ArgumentError("global sensitivity bound must be at least 1");
  }
  const double sigma = static_cast<double>(gs_upper) *
                       std::sqrt(2.0 * std::log(2.0 / pp.delta)) / pp.epsilon;
  RandomStream rng(seed);
  NoisyRelease out;
  out.value = static_cast<double>(count) + sigma * rng.normal();
  out.scale = {sigma, NoiseSource::Global, 0.0, 0.0};
  return out;
}

NoisyRelease gaussian_by_smooth(std::int64_t count,
                                const SensitivityBound& smooth_bound,
                                const PrivacyParams& pp, std::uint64_t seed) {
  pp.validate();
  if (smooth_bound.kind != BoundKind::SmoothUpper) {
    throw ArgumentError("gaussian_by_smooth requires a smooth upper bound");
  }
  const double alpha = smooth_alpha(pp);
  const double beta = smooth_beta(pp);
  const double rel = std::abs(smooth_bound.beta - beta) /
                     std::max(1.0, std::abs(beta));
  if (rel > 1e-9) {
    std::ostringstream msg;
    msg << "smooth bound was computed with beta=" << smooth_bound.beta
        << " but the privacy parameters require beta=" << beta
        << "; refusing to release under a mismatched smoothing rate";
    throw ConsistencyError(msg.str());
  }
  const double sigma = smooth_bound.value / alpha;
  RandomStream rng(seed);
  NoisyRelease out;
  out.value = static_cast<double>(count) + sigma * rng.normal();
  out.scale = {sigma, NoiseSource::Smooth, alpha, beta};
  return out;
}

namespace {

std::vector<double> shifted_weights(std::span<const double> utilities,
                                    double epsilon) {
  if (utilities.empty()) {
    throw ArgumentError("exponential mechanism needs at least one candidate");
  }
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  double top = -std::numeric_limits<double>::infinity();
  for (double u : utilities) {
    if (!std::isfinite(u)) {
      throw ArgumentError("exponential mechanism utilities must be finite");
    }
    top = std::max(top, u);
  }
  std::vector<double> weights(utilities.size());
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    weights[i] = std::exp(epsilon * (utilities[i] - top));
  }
  return weights;
}

}  // namespace

std::vector<double> exponential_probabilities(std::span<const double> utilities,
                                              double epsilon) {
  std::vector<double> weights = shifted_weights(utilities, epsilon);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return weights;
}

std::size_t exponential_choice(std::span<const double> utilities,
                               double epsilon, RandomStream& rng) {
  const std::vector<double> weights = shifted_weights(utilities, epsilon);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;  // guard against accumulated rounding
}

std::size_t exponential_choice(std::span<const double> utilities,
                               double epsilon, std::uint64_t seed) {
  RandomStream rng(seed);
  return exponential_choice(utilities, epsilon, rng);
}

double subspace_utility(const Dataset& x, const Subspace& s,
                        const OutlierParams& p,
                        const KissingNumberTable& table) {
  const auto [lower, upper] =
      global_sensitivity_bounds(x.n, s.size(), p.k, table);
  (void)lower;
  return static_cast<double>(count_outliers(x, s, p)) /
         static_cast<double>(upper);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void BudgetLedger::record(const std::string& description, double epsilon,
                          double delta) {
  if (epsilon < 0.0 || delta < 0.0) {
    throw ArgumentError("privacy spends must be nonnegative");
  }
  entries_.push_back({description, epsilon, delta, utc_timestamp()});
  epsilon_total_ += epsilon;
  delta_total_ += delta;
}

void BudgetLedger::export_jsonl(std::ostream& out) const {
  for (const Entry& e : entries_) {
    nlohmann::json j{{"description", e.description},
                     {"epsilon", e.epsilon},
                     {"delta", e.delta},
                     {"timestamp", e.timestamp}};
    out << j.dump() << "\n";
  }
}

void BudgetLedger::export_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open ledger export path: " + path);
  export_jsonl(out);
}

std::vector<std::size_t> top_h_select(std::span<const double> utilities,
                                      std::int32_t h, double epsilon,
                                      std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(utilities.size());
  if (h < 1 || h > n) {
    std::ostringstream msg;
    msg << "h=" << h << " must lie in [1, " << n << "]";
    throw ArgumentError(msg.str());
  }
  std::vector<std::size_t> remaining(utilities.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<std::size_t> selected;
  selected.reserve(static_cast<std::size_t>(h));
  const double round_epsilon = epsilon / h;
  for (std::int32_t round = 0; round < h; ++round) {
    std::vector<double> pool_utilities(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      pool_utilities[i] = utilities[remaining[i]];
    }
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(round)));
    const std::size_t pick =
        exponential_choice(pool_utilities, round_epsilon, rng);
    selected.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return selected;
}

std::vector<Subspace> top_h_subspaces(const Dataset& x,
                                      const std::vector<Subspace>& candidates,
                                      const OutlierParams& p, std::int32_t h,
                                      double epsilon,
                                      const KissingNumberTable& table,
                                      std::uint64_t seed,
                                      BudgetLedger* ledger) {
  if (candidates.empty()) {
    throw ArgumentError("candidate subspace set must be nonempty");
  }
  std::vector<double> utilities(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    utilities[i] = subspace_utility(x, candidates[i], p, table);
  }
  const std::vector<std::size_t> picks =
      top_h_select(utilities, h, epsilon, seed);
  std::vector<Subspace> out;
  out.reserve(picks.size());
  for (std::size_t idx : picks) out.push_back(candidates[idx]);
  if (ledger != nullptr) {
    std::ostringstream desc;
    desc << "top-" << h << " subspace discovery (2*eps*du accounting, du<=1)";
    ledger->record(desc.str(), 2.0 * epsilon, 0.0);
  }
  return out;
}

}  // namespace dpo
