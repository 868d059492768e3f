// Copyright 2026 The RBO Verifier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Segment decomposition of the slots following a start slot s, and the
// per-segment quantities the energy bounds are stated in.
//
// Starting at t_0 = s, each segment begins at t_i, has level l_i (trailing
// zero run of t_i, capped at k) and covers Y_i = [t_i, t_i + 2^l_i - 1]; the
// next one starts right after it. The decomposition ends with the first
// segment of level k. Every index broadcast during Y_i shares the same k-l_i
// low-order digits, beta_i.

#include <cstdint>
#include <optional>
#include <vector>

#include "rbo/bitops.hpp"
#include "rbo/protocol.hpp"

namespace rbo {

// Closed integer interval [lo, hi].
struct Interval {
  std::int64_t lo;
  std::int64_t hi;

  std::int64_t size() const { return hi < lo ? 0 : hi - lo + 1; }
  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Segment {
  int index = 0;
  std::int64_t start = 0;  // t_i
  int level = 0;           // l_i
  Interval slots{0, 0};    // Y_i
  BitString beta;          // k - l_i digits
  // Tail of beta after its (1)^(l_{i+1}-l_i)(0) prefix; set for i <= last-2.
  std::optional<BitString> alpha;

  int k() const { return level + beta.size(); }
};

struct Decomposition {
  int k = 0;
  std::int64_t start = 0;
  std::vector<Segment> segments;

  // Index of the first (and final) segment of level k.
  int last() const { return static_cast<int>(segments.size()) - 1; }
  const Segment& operator[](int i) const {
    return segments[static_cast<std::size_t>(i)];
  }
};

// Requires 0 <= k <= 62 and 0 <= s < 2^k.
Decomposition decompose(std::int64_t s, int k);

// Sublevel j of a segment: {t_i} for j = 0, [t_i + 2^(j-1), t_i + 2^j - 1]
// otherwise. Throws UsageError unless 0 <= j <= l_i.
Interval sublevel(const Segment& seg, int j);

// Indices broadcast during a window of at most n slots, ascending.
std::vector<std::int64_t> x_image(const Interval& slots, int k);
std::vector<std::int64_t> x_image(const Segment& seg);
std::vector<std::int64_t> x_image(const Segment& seg, int j);

// Membership in the unbounded congruence class extending X_i (no j) or the
// union of X_{i,0..j}: x mod 2^(k-l_i) == beta_i, resp.
// x mod 2^(k-j) == ((0)^(l_i-j) beta_i).
bool in_extension(std::int64_t x, const Segment& seg,
                  std::optional<int> j = std::nullopt);

enum class Side { kLeft, kRight };

struct SegmentQuantities {
  // Per sublevel j = 0..l_i.
  //  left:  p = max { x in class(i,j) : x < r' },  m = max lb_{t+1} - 1 over Y_ij
  //  right: p = min { x in class(i,j) : x > r'' }, m = min ub_{t+1} + 1 over Y_ij
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> m;
  std::int64_t p_segment = 0;  // same extremum over the class of the whole segment
  std::int64_t m_segment = 0;  // m at j = l_i
  std::int64_t x = 0;          // floor(p_segment / 2^(k - l_i))
};

struct SideQuantities {
  Side side = Side::kLeft;
  std::int64_t bound = 0;  // r' or r''
  std::optional<std::int64_t> first_update;  // t' or t''
  std::vector<SegmentQuantities> segments;
};

// The class extrema always exist because the classes are unbounded in both
// directions: left p values may be negative, right p values may exceed n-1.
// Throws UsageError if the trace was not produced for the decomposition's
// start slot and k.
SideQuantities side_quantities(const Decomposition& dec, const BoundsLedger& trace,
                               std::int64_t bound, Side side);

// (0)(1)^(l_{j+1} - l_j - 1). Throws UsageError unless 0 <= j <= last - 1.
BitString gamma(const Decomposition& dec, int j);

// Largest member of {x : x mod 2^w == residue} strictly below `bound`, and the
// smallest strictly above.
std::int64_t class_max_below(std::int64_t residue, int w, std::int64_t bound);
std::int64_t class_min_above(std::int64_t residue, int w, std::int64_t bound);

}  // namespace rbo
