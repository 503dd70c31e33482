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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dpoutlier/errors.hpp"
#include "dpoutlier/sensitivity.hpp"

namespace dpo {

namespace {

// Bounds on the kissing number K_d:
//   d = 1, 2      exact classical values,
//   d = 3         Schuette & van der Waerden,
//   d = 4         Musin,
//   d = 8, 24     Levenshtein / Odlyzko & Sloane (exact),
//   remaining d <= 24   semidefinite programming upper bounds
//                       (Mittelmann & Vallentin),
//   d = 25..34    the elementary volume bound 3^d - 1 (unit spheres kissing
//                 a central unit sphere fit disjointly in a radius-3 ball).
// The loose volume-bound entries only feed min(N, k*K_d + 1), which clamps
// to N long before these magnitudes matter.
constexpr const char* kDefaultTableText = R"(# dimension  K_d upper bound  citation
1 2 classical-exact
2 6 classical-exact
3 12 schuette-vdw-1952
4 24 musin-2008
5 44 mittelmann-vallentin-2010
6 78 mittelmann-vallentin-2010
7 134 mittelmann-vallentin-2010
8 240 odlyzko-sloane-1979
9 364 mittelmann-vallentin-2010
10 554 mittelmann-vallentin-2010
11 870 mittelmann-vallentin-2010
12 1357 mittelmann-vallentin-2010
13 2069 mittelmann-vallentin-2010
14 3183 mittelmann-vallentin-2010
15 4866 mittelmann-vallentin-2010
16 7355 mittelmann-vallentin-2010
17 11072 mittelmann-vallentin-2010
18 16572 mittelmann-vallentin-2010
19 24812 mittelmann-vallentin-2010
20 36764 mittelmann-vallentin-2010
21 54584 mittelmann-vallentin-2010
22 82340 mittelmann-vallentin-2010
23 124416 mittelmann-vallentin-2010
24 196560 odlyzko-sloane-1979
25 847288609442 volume-bound
26 2541865828328 volume-bound
27 7625597484986 volume-bound
28 22876792454960 volume-bound
29 68630377364882 volume-bound
30 205891132094648 volume-bound
31 617673396283946 volume-bound
32 1853020188851840 volume-bound
33 5559060566555522 volume-bound
34 16677181699666568 volume-bound
)";

}  // namespace

const KissingNumberTable& KissingNumberTable::embedded_default() {
  static const KissingNumberTable table = parse(kDefaultTableText);
  return table;
}

KissingNumberTable KissingNumberTable::parse(const std::string& text) {
  KissingNumberTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::int32_t dim = 0;
    std::int64_t upper = 0;
    std::string citation;
    if (!(fields >> dim)) continue;  // blank line
    if (!(fields >> upper >> citation)) {
      std::ostringstream msg;
      msg << "kissing-number table line " << line_no
          << ": expected '<d> <K_d_upper> <citation-key>'";
      throw ParseError(msg.str());
    }
    if (dim < 1 || upper < 1) {
      std::ostringstream msg;
      msg << "kissing-number table line " << line_no
          << ": dimension and bound must be positive";
      throw ParseError(msg.str());
    }
    table.entries_.push_back({dim, upper, citation});
  }
  std::sort(table.entries_.begin(), table.entries_.end(),
            [](const Entry& a, const Entry& b) { return a.dim < b.dim; });
  for (std::size_t i = 1; i < table.entries_.size(); ++i) {
    if (table.entries_[i].dim == table.entries_[i - 1].dim) {
      std::ostringstream msg;
      msg << "kissing-number table lists dimension " << table.entries_[i].dim
          << " twice";
      throw ParseError(msg.str());
    }
  }
  if (table.entries_.empty()) {
    throw ParseError("kissing-number table contains no entries");
  }
  return table;
}

KissingNumberTable KissingNumberTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kissing-number table: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool KissingNumberTable::has(std::int32_t d) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [d](const Entry& e) { return e.dim == d; });
}

std::int64_t KissingNumberTable::upper_bound(std::int32_t d) const {
  for (const Entry& e : entries_) {
    if (e.dim == d) return e.upper;
  }
  std::ostringstream msg;
  msg << "kissing-number table has no entry for dimension " << d
      << " (covered: 1.." << max_dim() << ")";
  throw DimensionError(msg.str());
}

std::int32_t KissingNumberTable::max_dim() const {
  return entries_.empty() ? 0 : entries_.back().dim;
}

}  // namespace dpo
