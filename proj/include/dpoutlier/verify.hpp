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

#ifndef DPOUTLIER_VERIFY_HPP
#define DPOUTLIER_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dpo::verify {

struct CheckResult {
  std::string name;
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  std::string detail;  // failing seeds / measured values

  bool passed() const { return failures == 0; }
};

struct Options {
  std::uint64_t seed = 1;
  std::int64_t seb_instances = 200;
  std::int64_t coverable_pools = 200;
  std::int64_t smooth_instances = 50;
  std::int64_t local_instances = 100;
  std::int64_t em_draws = 100000;
  std::int64_t dp_draws = 1000000;
  // Perturbs one comparison on purpose so the harness can prove it reports
  // failures; never set outside self-tests.
  bool inject_failure = false;
};

struct Report {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string format() const;  // one line per check
};

// Runs the oracle-equivalence and privacy-ratio suites.
Report run(const Options& options);

}  // namespace dpo::verify

#endif  // DPOUTLIER_VERIFY_HPP
