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

#include "rbo/analysis.hpp"

#include <algorithm>
#include <string>

#include "rbo/error.hpp"

namespace rbo {

Decomposition decompose(std::int64_t s, int k) {
  if (k < 0 || k > 62) throw UsageError("k outside [0, 62]");
  const std::int64_t n = std::int64_t{1} << k;
  if (s < 0 || s >= n) {
    throw UsageError("start slot " + std::to_string(s) + " outside [0, n-1]");
  }

  Decomposition dec;
  dec.k = k;
  dec.start = s;
  std::int64_t t = s;
  while (true) {
    Segment seg;
    seg.index = static_cast<int>(dec.segments.size());
    seg.start = t;
    seg.level = trailing_zero_run(static_cast<std::uint64_t>(t), k);
    seg.slots = {t, t + (std::int64_t{1} << seg.level) - 1};
    seg.beta = bin_fixed(rev_k(t, k), k - seg.level);
    dec.segments.push_back(seg);
    if (seg.level == k) break;
    t += std::int64_t{1} << seg.level;
  }

  for (int i = 0; i + 2 <= dec.last(); ++i) {
    auto& seg = dec.segments[static_cast<std::size_t>(i)];
    const int rise = dec[i + 1].level - seg.level;
    seg.alpha = seg.beta.suffix(seg.beta.size() - rise - 1);
  }
  return dec;
}

Interval sublevel(const Segment& seg, int j) {
  if (j < 0 || j > seg.level) {
    throw UsageError("sublevel " + std::to_string(j) + " outside [0, " +
                     std::to_string(seg.level) + "]");
  }
  if (j == 0) return {seg.start, seg.start};
  return {seg.start + (std::int64_t{1} << (j - 1)),
          seg.start + (std::int64_t{1} << j) - 1};
}

std::vector<std::int64_t> x_image(const Interval& slots, int k) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(slots.size()));
  for (std::int64_t t = slots.lo; t <= slots.hi; ++t) {
    out.push_back(static_cast<std::int64_t>(rev_k(t, k)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> x_image(const Segment& seg) {
  return x_image(seg.slots, seg.k());
}

std::vector<std::int64_t> x_image(const Segment& seg, int j) {
  return x_image(sublevel(seg, j), seg.k());
}

bool in_extension(std::int64_t x, const Segment& seg, std::optional<int> j) {
  const int k = seg.k();
  if (!j) {
    return mod_pow2(x, k - seg.level) ==
           static_cast<std::int64_t>(to_value(seg.beta));
  }
  if (*j < 0 || *j > seg.level) throw UsageError("sublevel out of range");
  const auto residue = to_value(concat(zeros(seg.level - *j), seg.beta));
  return mod_pow2(x, k - *j) == static_cast<std::int64_t>(residue);
}

std::int64_t class_max_below(std::int64_t residue, int w, std::int64_t bound) {
  return (bound - 1) - mod_pow2(bound - 1 - residue, w);
}

std::int64_t class_min_above(std::int64_t residue, int w, std::int64_t bound) {
  return (bound + 1) + mod_pow2(residue - bound - 1, w);
}

SideQuantities side_quantities(const Decomposition& dec, const BoundsLedger& trace,
                               std::int64_t bound, Side side) {
  if (trace.start != dec.start || trace.k != dec.k) {
    throw UsageError("trace and decomposition disagree on start slot or k");
  }
  const int k = dec.k;
  const bool left = side == Side::kLeft;

  SideQuantities out;
  out.side = side;
  out.bound = bound;
  out.first_update = left ? trace.first_left : trace.first_right;

  auto extremum = [&](std::int64_t residue, int w) {
    return left ? class_max_below(residue, w, bound)
                : class_min_above(residue, w, bound);
  };

  for (const auto& seg : dec.segments) {
    SegmentQuantities q;
    const auto beta = static_cast<std::int64_t>(to_value(seg.beta));
    for (int j = 0; j <= seg.level; ++j) {
      const auto residue =
          static_cast<std::int64_t>(to_value(concat(zeros(seg.level - j), seg.beta)));
      q.p.push_back(extremum(residue, k - j));

      const auto slots = sublevel(seg, j);
      std::int64_t m = left ? trace.lb_before(slots.lo + 1) - 1
                            : trace.ub_before(slots.lo + 1) + 1;
      for (std::int64_t t = slots.lo; t <= slots.hi; ++t) {
        m = left ? std::max(m, trace.lb_before(t + 1) - 1)
                 : std::min(m, trace.ub_before(t + 1) + 1);
      }
      q.m.push_back(m);
    }
    q.p_segment = extremum(beta, k - seg.level);
    q.m_segment = q.m.back();
    q.x = floor_div_pow2(q.p_segment, k - seg.level);
    out.segments.push_back(std::move(q));
  }
  return out;
}

BitString gamma(const Decomposition& dec, int j) {
  if (j < 0 || j >= dec.last()) {
    throw UsageError("gamma index " + std::to_string(j) + " outside [0, last-1]");
  }
  const int rise = dec[j + 1].level - dec[j].level;
  return concat(zeros(1), ones(rise - 1));
}

}  // namespace rbo
