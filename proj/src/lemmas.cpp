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

// Statement-level checks of the per-segment energy bounds. Each check reads
// its premises off a simulated trace and asserts the conclusion only where
// the premises hold; otherwise the instance counts as vacuous.

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <string>

#include "parallel.hpp"
#include "rbo/analysis.hpp"
#include "rbo/bitops.hpp"
#include "rbo/error.hpp"
#include "rbo/verifier.hpp"

namespace rbo {
namespace {

struct LemmaInfo {
  const char* name;
  const char* statement;
};

// Report order. The first two depend on (s, k) only.
const LemmaInfo kLemmas[] = {
    {"suffix_order", "beta_i = rho gamma with |gamma| = |beta_{i+1}| implies (gamma)_2 <= (beta_{i+1})_2"},
    {"segment_structure", "segments tile the window; beta/alpha chaining; min/max of X_i; class and bit characterizations of X_i, X_ij"},
    {"left_prefix_max", "m'_ij = max({-1} u {x < r' heard up to Y_ij}); m'_ij >= p'_ij; t' = s implies m'_ij >= 0"},
    {"left_sublevel", "t' = s implies U_{t in Y_ij} L_t subset of {p'_ij} n X_ij"},
    {"left_first_segment", "t' = s implies |U_{t in Y_0} L_t| <= l_0 + 1"},
    {"left_middle_segment", "t' = s implies |U_{t in Y_{i+1}} L_t| <= l_{i+1} - l_i for i <= last-2"},
    {"left_last_segment", "last > 0 and t' = s imply |U_{t in Y_last} L_t| <= l_last - l_{last-1}"},
    {"left_total", "|U L_t| <= k + 1"},
    {"right_prefix_min", "m''_ij = min({n} u {x > r'' heard up to Y_ij}); m''_ij <= p''_ij; t'' = s implies m''_ij <= n-1"},
    {"right_sublevel", "t'' = s implies U_{t in Y_ij} U_t subset of {p''_ij} n X_ij"},
    {"right_first_segment", "t'' = s implies |U_{t in Y_0} U_t| = 1"},
    {"right_middle_segment", "t'' = s implies |U_{t in Y_{i+1}} U_t| <= max(l_{i+1} - l_i, 2) for i <= last-2"},
    {"right_last_segment", "last > 0 and t'' = s imply |U_{t in Y_last} U_t| <= l_last - l_{last-1}"},
    {"right_steps", "t'' = s, x''_{i+1} >= (bin(x''_i)(0)^{d-1}(1))_2 and |U_{Y_{i+1}}| >= d imply equality in both and m''_{i+1} = p''_{i+1}"},
    {"right_bin", "t'' = s, l_{i+1} = l_i + 1 and |U_{Y_{i+1}}| = 2 imply l_i > 0, x''_i > 0, x''_{i+1} = (bin(x''_i - 1)(1))_2, m''_{i+1} = p''_{i+1}"},
    {"right_patch", "t'' = s, x''_{i+1} = (bin(x''_i - 1)(1))_2, m''_{i+1} = p''_{i+1} and full counts on Y_{i+2..i+2+d} imply counts = rise <= 2, x'' follows gamma, m'' = p''"},
    {"right_total", "|U U_t| <= k + 2"},
    {"extra_total", "|U L_t| + |U U_t| <= 2k + 3"},
};
constexpr std::size_t kLemmaCount = std::size(kLemmas);

enum class Verdict { kPass, kVacuous, kFail };

struct Outcome {
  Verdict verdict = Verdict::kVacuous;
  std::string detail;

  static Outcome pass() { return {Verdict::kPass, {}}; }
  static Outcome vacuous() { return {Verdict::kVacuous, {}}; }
  static Outcome fail(std::string why) { return {Verdict::kFail, std::move(why)}; }
};

using Trace = ReceiverTrace<std::int64_t>;

std::string str(std::int64_t v) { return std::to_string(v); }

bool contains_sorted(const std::vector<std::int64_t>& v, std::int64_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

std::size_t distinct_count(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

// Everything the checks need about one trace.
struct Context {
  int k;
  std::int64_t n;
  std::int64_t s;
  TargetBounds targets;
  const Trace& trace;
  const Decomposition& dec;
  SideQuantities left;
  SideQuantities right;
  // Changed indices grouped by segment and by (segment, sublevel).
  std::vector<std::vector<std::int64_t>> left_seg, right_seg;
  std::vector<std::vector<std::vector<std::int64_t>>> left_sub, right_sub;
  std::vector<std::vector<std::vector<std::int64_t>>> images;  // X_ij, sorted

  Context(const Trace& tr, const Decomposition& d, TargetBounds tb)
      : k(d.k), n(tr.n), s(tr.start), targets(tb), trace(tr), dec(d),
        left(side_quantities(d, tr, tb.lo, Side::kLeft)),
        right(side_quantities(d, tr, tb.hi, Side::kRight)) {
    const auto segs = d.segments.size();
    left_seg.resize(segs);
    right_seg.resize(segs);
    left_sub.resize(segs);
    right_sub.resize(segs);
    images.resize(segs);
    for (std::size_t i = 0; i < segs; ++i) {
      const auto levels = static_cast<std::size_t>(d.segments[i].level) + 1;
      left_sub[i].resize(levels);
      right_sub[i].resize(levels);
      for (int j = 0; j <= d.segments[i].level; ++j) {
        images[i].push_back(x_image(d.segments[i], j));
      }
    }
    place(tr.left_changes, left_seg, left_sub);
    place(tr.right_changes, right_seg, right_sub);
  }

  void place(const std::vector<SlotChange>& changes,
             std::vector<std::vector<std::int64_t>>& by_seg,
             std::vector<std::vector<std::vector<std::int64_t>>>& by_sub) const {
    for (const auto& c : changes) {
      for (const auto& seg : dec.segments) {
        if (!seg.slots.contains(c.slot)) continue;
        const auto offset = static_cast<std::uint64_t>(c.slot - seg.start);
        const int j = static_cast<int>(std::bit_width(offset));
        by_seg[static_cast<std::size_t>(seg.index)].push_back(c.index);
        by_sub[static_cast<std::size_t>(seg.index)][static_cast<std::size_t>(j)].push_back(c.index);
        break;
      }
    }
  }

  int last() const { return dec.last(); }
  int level(int i) const { return dec[i].level; }
  std::int64_t rise(int i) const { return level(i + 1) - level(i); }
  bool first_left_at_start() const { return trace.first_left && *trace.first_left == s; }
  bool first_right_at_start() const { return trace.first_right && *trace.first_right == s; }
  const SegmentQuantities& lq(int i) const { return left.segments[static_cast<std::size_t>(i)]; }
  const SegmentQuantities& rq(int i) const { return right.segments[static_cast<std::size_t>(i)]; }
  std::int64_t left_count(int i) const { return static_cast<std::int64_t>(distinct_count(left_seg[static_cast<std::size_t>(i)])); }
  std::int64_t right_count(int i) const { return static_cast<std::int64_t>(distinct_count(right_seg[static_cast<std::size_t>(i)])); }
};

std::int64_t value(const BitString& b) { return static_cast<std::int64_t>(to_value(b)); }

// ---- statements depending on (s, k) only ---------------------------------

Outcome suffix_order(const Decomposition& dec) {
  if (dec.k < 2 || dec.last() == 0) return Outcome::vacuous();
  for (int i = 0; i + 1 <= dec.last(); ++i) {
    const auto& next = dec[i + 1].beta;
    const auto tail = dec[i].beta.suffix(next.size());
    if (value(tail) > value(next)) {
      return Outcome::fail("i=" + str(i) + " tail " + tail.str() + " > beta_{i+1} " + next.str());
    }
  }
  return Outcome::pass();
}

Outcome segment_structure(const Decomposition& dec) {
  const int k = dec.k;
  const std::int64_t n = std::int64_t{1} << k;
  const int last = dec.last();
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  for (int i = 0; i <= last; ++i) {
    const auto& seg = dec[i];
    if (i == 0 && seg.start != dec.start) return Outcome::fail("t_0 != s");
    if (i > 0 && seg.start != dec[i - 1].slots.hi + 1) return Outcome::fail("gap before segment " + str(i));
    if (seg.slots.size() != (std::int64_t{1} << seg.level)) return Outcome::fail("|Y_i| != 2^l_i");
    if ((seg.level == k) != (i == last)) return Outcome::fail("last is not the first level-k segment");

    const auto xs = x_image(seg);
    if (static_cast<std::int64_t>(xs.size()) != seg.slots.size()) return Outcome::fail("X_i lost elements");
    if (xs.front() != static_cast<std::int64_t>(rev_k(seg.start, k)) ||
        xs.front() != value(concat(zeros(seg.level), seg.beta))) {
      return Outcome::fail("min X_" + str(i) + " mismatch");
    }
    if (xs.back() != value(concat(ones(seg.level), seg.beta))) {
      return Outcome::fail("max X_" + str(i) + " mismatch");
    }
    if (i < last) {
      for (auto x : xs) {
        if (++hits[static_cast<std::size_t>(x)] > 1) return Outcome::fail("X sets overlap at " + str(x));
      }
    } else if (static_cast<std::int64_t>(xs.size()) != n) {
      return Outcome::fail("X_last is not all indices");
    }

    for (std::int64_t x = 0; x < n; ++x) {
      if (in_extension(x, seg) != contains_sorted(xs, x)) {
        return Outcome::fail("class of segment " + str(i) + " disagrees at x=" + str(x));
      }
    }
    std::vector<std::int64_t> so_far;
    for (int j = 0; j <= seg.level; ++j) {
      const auto xj = x_image(seg, j);
      so_far.insert(so_far.end(), xj.begin(), xj.end());
      std::sort(so_far.begin(), so_far.end());
      for (std::int64_t x = 0; x < n; ++x) {
        if (in_extension(x, seg, j) != contains_sorted(so_far, x)) {
          return Outcome::fail("class of sublevel (" + str(i) + "," + str(j) + ") disagrees");
        }
      }
      // Bit pattern: (0)^l beta for j = 0, rho (1) (0)^(l-j) beta otherwise.
      for (auto x : xj) {
        const auto bits = bin_fixed(static_cast<std::uint64_t>(x), k);
        const auto tail = concat(j == 0 ? zeros(seg.level) : concat(ones(1), zeros(seg.level - j)),
                                 seg.beta);
        if (bits.suffix(tail.size()) != tail) {
          return Outcome::fail("bit pattern of X_(" + str(i) + "," + str(j) + ")");
        }
      }
    }

    if (i + 2 <= last) {
      if (!seg.alpha) return Outcome::fail("alpha missing for segment " + str(i));
      const auto rebuilt = concat(concat(ones(dec[i + 1].level - seg.level), zeros(1)), *seg.alpha);
      if (rebuilt != seg.beta) return Outcome::fail("beta_" + str(i) + " lacks (1)^d(0) prefix");
      if (i + 1 < last && dec[i + 1].beta != concat(ones(1), *seg.alpha)) {
        return Outcome::fail("beta_{i+1} != (1) alpha_i at i=" + str(i));
      }
    }
  }
  if (dec.start != 0 && dec[last].slots != Interval{n, 2 * n - 1}) return Outcome::fail("Y_last != [n, 2n-1]");
  if (dec.start == 0 && (last != 0 || dec[0].slots != Interval{0, n - 1})) return Outcome::fail("s = 0 layout");
  if (last > 0 && dec[last - 1].beta != ones(dec[last].level - dec[last - 1].level)) {
    return Outcome::fail("beta_{last-1} not all ones");
  }
  if (!dec[last].beta.empty()) return Outcome::fail("beta_last not empty");
  return Outcome::pass();
}

// ---- left side -----------------------------------------------------------

Outcome left_prefix_max(const Context& c) {
  if (c.k < 2) return Outcome::vacuous();
  std::int64_t running = -1;
  for (int i = 0; i <= c.last(); ++i) {
    for (int j = 0; j <= c.level(i); ++j) {
      for (auto x : c.images[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        if (x < c.targets.lo) running = std::max(running, x);
      }
      const auto m = c.lq(i).m[static_cast<std::size_t>(j)];
      const auto p = c.lq(i).p[static_cast<std::size_t>(j)];
      if (m != running) return Outcome::fail("m'(" + str(i) + "," + str(j) + ")=" + str(m) + " expected " + str(running));
      if (m < p) return Outcome::fail("m' < p' at (" + str(i) + "," + str(j) + ")");
      if (c.first_left_at_start() && m < 0) return Outcome::fail("m' < 0 although t' = s");
    }
  }
  return Outcome::pass();
}

Outcome left_sublevel(const Context& c) {
  if (c.k < 2 || !c.first_left_at_start()) return Outcome::vacuous();
  for (int i = 0; i <= c.last(); ++i) {
    for (int j = 0; j <= c.level(i); ++j) {
      const auto p = c.lq(i).p[static_cast<std::size_t>(j)];
      const auto& xij = c.images[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      for (auto idx : c.left_sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        if (idx != p || !contains_sorted(xij, idx)) {
          return Outcome::fail("L index " + str(idx) + " in Y(" + str(i) + "," + str(j) + ") vs p'=" + str(p));
        }
      }
    }
  }
  return Outcome::pass();
}

Outcome left_first_segment(const Context& c) {
  if (c.k < 2 || !c.first_left_at_start()) return Outcome::vacuous();
  const auto got = c.left_count(0);
  if (got > c.level(0) + 1) return Outcome::fail(str(got) + " > l_0 + 1");
  return Outcome::pass();
}

Outcome left_middle_segment(const Context& c) {
  if (c.k < 2 || !c.first_left_at_start() || c.last() < 2) return Outcome::vacuous();
  for (int i = 0; i <= c.last() - 2; ++i) {
    const auto got = c.left_count(i + 1);
    if (got > c.rise(i)) return Outcome::fail("i=" + str(i) + ": " + str(got) + " > " + str(c.rise(i)));
  }
  return Outcome::pass();
}

Outcome left_last_segment(const Context& c) {
  if (c.k < 2 || !c.first_left_at_start() || c.last() == 0) return Outcome::vacuous();
  const auto got = c.left_count(c.last());
  if (got > c.rise(c.last() - 1)) return Outcome::fail(str(got) + " > " + str(c.rise(c.last() - 1)));
  return Outcome::pass();
}

// ---- right side ----------------------------------------------------------

Outcome right_prefix_min(const Context& c) {
  if (c.k < 2) return Outcome::vacuous();
  std::int64_t running = c.n;
  for (int i = 0; i <= c.last(); ++i) {
    for (int j = 0; j <= c.level(i); ++j) {
      for (auto x : c.images[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        if (x > c.targets.hi) running = std::min(running, x);
      }
      const auto m = c.rq(i).m[static_cast<std::size_t>(j)];
      const auto p = c.rq(i).p[static_cast<std::size_t>(j)];
      if (m != running) return Outcome::fail("m''(" + str(i) + "," + str(j) + ")=" + str(m) + " expected " + str(running));
      if (m > p) return Outcome::fail("m'' > p'' at (" + str(i) + "," + str(j) + ")");
      if (c.first_right_at_start() && m > c.n - 1) return Outcome::fail("m'' > n-1 although t'' = s");
    }
  }
  return Outcome::pass();
}

Outcome right_sublevel(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start()) return Outcome::vacuous();
  for (int i = 0; i <= c.last(); ++i) {
    for (int j = 0; j <= c.level(i); ++j) {
      const auto p = c.rq(i).p[static_cast<std::size_t>(j)];
      const auto& xij = c.images[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      for (auto idx : c.right_sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        if (idx != p || !contains_sorted(xij, idx)) {
          return Outcome::fail("U index " + str(idx) + " in Y(" + str(i) + "," + str(j) + ") vs p''=" + str(p));
        }
      }
    }
  }
  return Outcome::pass();
}

Outcome right_first_segment(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start()) return Outcome::vacuous();
  const auto got = c.right_count(0);
  if (got != 1) return Outcome::fail(str(got) + " != 1");
  return Outcome::pass();
}

Outcome right_middle_segment(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start() || c.last() < 2) return Outcome::vacuous();
  for (int i = 0; i <= c.last() - 2; ++i) {
    const auto got = c.right_count(i + 1);
    const auto cap = std::max<std::int64_t>(c.rise(i), 2);
    if (got > cap) return Outcome::fail("i=" + str(i) + ": " + str(got) + " > " + str(cap));
  }
  return Outcome::pass();
}

Outcome right_last_segment(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start() || c.last() == 0) return Outcome::vacuous();
  const auto got = c.right_count(c.last());
  if (got > c.rise(c.last() - 1)) return Outcome::fail(str(got) + " > " + str(c.rise(c.last() - 1)));
  return Outcome::pass();
}

Outcome right_steps(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start()) return Outcome::vacuous();
  bool applied = false;
  for (int i = 0; i <= c.last() - 1; ++i) {
    const auto d = static_cast<int>(c.rise(i));
    const auto x = c.rq(i).x;
    const auto floor_x = value(concat(concat(bin(static_cast<std::uint64_t>(x)), zeros(d - 1)), ones(1)));
    const auto got = c.right_count(i + 1);
    if (c.rq(i + 1).x < floor_x || got < d) continue;
    applied = true;
    if (got != d) return Outcome::fail("i=" + str(i) + ": count " + str(got) + " != " + str(d));
    if (c.rq(i + 1).x != floor_x) return Outcome::fail("i=" + str(i) + ": x''_{i+1}=" + str(c.rq(i + 1).x) + " != " + str(floor_x));
    if (c.rq(i + 1).m_segment != c.rq(i + 1).p_segment) return Outcome::fail("i=" + str(i) + ": m''_{i+1} != p''_{i+1}");
  }
  return applied ? Outcome::pass() : Outcome::vacuous();
}

Outcome right_bin(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start()) return Outcome::vacuous();
  bool applied = false;
  for (int i = 0; i <= c.last() - 1; ++i) {
    if (c.rise(i) != 1 || c.right_count(i + 1) != 2) continue;
    applied = true;
    const auto x = c.rq(i).x;
    if (c.level(i) == 0) return Outcome::fail("i=" + str(i) + ": l_i = 0");
    if (x <= 0) return Outcome::fail("i=" + str(i) + ": x''_i = " + str(x));
    const auto expect = value(concat(bin(static_cast<std::uint64_t>(x - 1)), ones(1)));
    if (c.rq(i + 1).x != expect) return Outcome::fail("i=" + str(i) + ": x''_{i+1}=" + str(c.rq(i + 1).x) + " != " + str(expect));
    if (c.rq(i + 1).m_segment != c.rq(i + 1).p_segment) return Outcome::fail("i=" + str(i) + ": m''_{i+1} != p''_{i+1}");
  }
  return applied ? Outcome::pass() : Outcome::vacuous();
}

Outcome right_patch(const Context& c) {
  if (c.k < 2 || !c.first_right_at_start()) return Outcome::vacuous();
  bool applied = false;
  for (int i = 0; i <= c.last() - 2; ++i) {
    const auto xi = c.rq(i).x;
    if (xi < 1) continue;
    const auto x1 = c.rq(i + 1).x;
    if (x1 != value(concat(bin(static_cast<std::uint64_t>(xi - 1)), ones(1)))) continue;
    if (c.rq(i + 1).m_segment != c.rq(i + 1).p_segment) continue;
    int run_length = 0;
    while (i + 2 + run_length <= c.last() &&
           c.right_count(i + 2 + run_length) >= c.rise(i + 1 + run_length)) {
      ++run_length;
    }
    if (run_length == 0) continue;
    applied = true;
    BitString digits = bin(static_cast<std::uint64_t>(x1));
    for (int cc = 0; cc < run_length; ++cc) {
      const int seg = i + 2 + cc;
      const auto got = c.right_count(seg);
      const auto want = c.rise(seg - 1);
      if (got != want || got > 2) {
        return Outcome::fail("i=" + str(i) + " c=" + str(cc) + ": count " + str(got) + " vs rise " + str(want));
      }
      digits = concat(digits, gamma(c.dec, i + 1 + cc));
      if (c.rq(seg).x != value(digits)) {
        return Outcome::fail("i=" + str(i) + " c=" + str(cc) + ": x''=" + str(c.rq(seg).x) + " != " + str(value(digits)));
      }
      if (c.rq(seg).m_segment != c.rq(seg).p_segment) {
        return Outcome::fail("i=" + str(i) + " c=" + str(cc) + ": m'' != p''");
      }
    }
  }
  return applied ? Outcome::pass() : Outcome::vacuous();
}

// ---- totals --------------------------------------------------------------

Outcome left_total(const Context& c) {
  const auto e = energies(c.trace);
  if (e.left > c.k + 1) return Outcome::fail(str(e.left) + " > k + 1");
  return Outcome::pass();
}

Outcome right_total(const Context& c) {
  const auto e = energies(c.trace);
  if (e.right > c.k + 2) return Outcome::fail(str(e.right) + " > k + 2");
  return Outcome::pass();
}

Outcome extra_total(const Context& c) {
  const auto e = energies(c.trace);
  if (e.extra > 2 * c.k + 3) return Outcome::fail(str(e.extra) + " > 2k + 3");
  if (c.k <= 1 && e.extra > 2) return Outcome::fail(str(e.extra) + " > 2 for k <= 1");
  return Outcome::pass();
}

using TraceCheck = Outcome (*)(const Context&);

// Indices 2.. of kLemmas.
const TraceCheck kTraceChecks[] = {
    left_prefix_max,      left_sublevel,      left_first_segment, left_middle_segment,
    left_last_segment,    left_total,         right_prefix_min,   right_sublevel,
    right_first_segment,  right_middle_segment, right_last_segment, right_steps,
    right_bin,            right_patch,        right_total,        extra_total,
};
static_assert(std::size(kTraceChecks) + 2 == kLemmaCount);

// ---- driver --------------------------------------------------------------

std::vector<std::string> replay(const Trace& trace, const Decomposition& dec,
                                const QueryInterval<std::int64_t>& q) {
  std::vector<std::string> lines;
  lines.push_back("keys 2i, query [" + str(q.lo) + ", " + str(q.hi) + "]");
  for (const auto& seg : dec.segments) {
    lines.push_back("segment " + str(seg.index) + " t=" + str(seg.start) +
                    " l=" + str(seg.level) + " beta=" + seg.beta.str());
  }
  std::ostringstream out;
  write_trace_records(out, trace);
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

void tally(LemmaTally& t, const Outcome& o, const Instance& inst, std::size_t max_cx,
           const std::function<std::vector<std::string>()>& make_replay) {
  ++t.checked;
  switch (o.verdict) {
    case Verdict::kPass: ++t.passed; break;
    case Verdict::kVacuous: ++t.vacuous; break;
    case Verdict::kFail:
      ++t.failed;
      if (t.counterexamples.size() < max_cx) {
        t.counterexamples.push_back({inst, t.name, o.detail, make_replay()});
      }
      break;
  }
}

LemmaReport empty_report(int k_min, int k_max) {
  LemmaReport r;
  r.k_min = k_min;
  r.k_max = k_max;
  for (const auto& info : kLemmas) {
    LemmaTally t;
    t.name = info.name;
    t.statement = info.statement;
    r.lemmas.push_back(std::move(t));
  }
  return r;
}

void check_start_slot(int k, std::int64_t s, const LemmaSuiteConfig& cfg, LemmaReport& out) {
  const std::int64_t n = std::int64_t{1} << k;
  const auto dec = decompose(s, k);
  auto structure_replay = [&] {
    std::vector<std::string> lines;
    for (const auto& seg : dec.segments) {
      lines.push_back("segment " + str(seg.index) + " t=" + str(seg.start) +
                      " l=" + str(seg.level) + " beta=" + seg.beta.str());
    }
    return lines;
  };
  const Instance base{k, s, 0, n - 1};
  tally(out.lemmas[0], suffix_order(dec), base, cfg.max_counterexamples, structure_replay);
  tally(out.lemmas[1], segment_structure(dec), base, cfg.max_counterexamples, structure_replay);

  const auto keys = query_for_targets(n, 0, n - 1).keys;
  const auto cycle = BroadcastCycle<std::int64_t>::from_keys(keys);

  auto evaluate_all = [&](const Trace& trace, const Decomposition& d, TargetBounds tb,
                          const QueryInterval<std::int64_t>& q) {
    const Context ctx(trace, d, tb);
    const Instance inst{k, trace.start, tb.lo, tb.hi};
    for (std::size_t i = 0; i < std::size(kTraceChecks); ++i) {
      tally(out.lemmas[i + 2], kTraceChecks[i](ctx), inst, cfg.max_counterexamples,
            [&] { return replay(trace, d, q); });
    }
  };

  auto other = [&](const Instance& inst, std::string check, std::string detail,
                   const Trace& trace, const Decomposition& d,
                   const QueryInterval<std::int64_t>& q) {
    if (out.other_failures.size() < cfg.max_counterexamples) {
      out.other_failures.push_back({inst, std::move(check), std::move(detail), replay(trace, d, q)});
    }
  };

  for (std::int64_t r_lo = 0; r_lo <= n; ++r_lo) {
    for (std::int64_t r_hi = r_lo - 1; r_hi < n; ++r_hi) {
      const auto q = query_for_targets(n, r_lo, r_hi).query;
      const TargetBounds tb{r_lo, r_hi};
      const Instance inst{k, s, r_lo, r_hi};
      const auto trace = run(cycle, q, s);
      ++out.instances;

      if (target_bounds(cycle, q) != tb) {
        ++out.protocol_failures;
        other(inst, "targets", "query does not realize targets", trace, dec, q);
      }
      if (!closed_form_crosscheck(trace, cycle, q)) {
        ++out.closed_form_mismatches;
        other(inst, "closed-form", "histories differ from closed form", trace, dec, q);
      }
      if (auto why = protocol_violation(trace, tb)) {
        ++out.protocol_failures;
        other(inst, "protocol", *why, trace, dec, q);
      }
      evaluate_all(trace, dec, tb, q);

      const auto base_energy = energies(trace);
      auto restart = [&](std::optional<std::int64_t> first, bool left_side) {
        if (!first) return;
        const auto s2 = mod_pow2(*first, k);
        const auto trace2 = run(cycle, q, s2);
        const auto dec2 = decompose(s2, k);
        ++out.restarts;
        const auto e2 = energies(trace2);
        const bool premise = left_side ? (trace2.first_left && *trace2.first_left == s2)
                                       : (trace2.first_right && *trace2.first_right == s2);
        const bool same = left_side ? e2.left == base_energy.left : e2.right == base_energy.right;
        if (!premise || !same) {
          ++out.shift_failures;
          other(inst, "shift", std::string(left_side ? "left" : "right") +
                                   " restart at " + str(s2) + " changed the energy or missed the premise",
                trace2, dec2, q);
        }
        evaluate_all(trace2, dec2, tb, q);
      };
      restart(trace.first_left, true);
      restart(trace.first_right, false);
    }
  }
}

void merge(LemmaReport& into, const LemmaReport& part, std::size_t max_cx) {
  into.instances += part.instances;
  into.restarts += part.restarts;
  into.closed_form_mismatches += part.closed_form_mismatches;
  into.protocol_failures += part.protocol_failures;
  into.shift_failures += part.shift_failures;
  for (std::size_t i = 0; i < into.lemmas.size(); ++i) {
    auto& a = into.lemmas[i];
    const auto& b = part.lemmas[i];
    a.checked += b.checked;
    a.passed += b.passed;
    a.vacuous += b.vacuous;
    a.failed += b.failed;
    for (const auto& cx : b.counterexamples) {
      if (a.counterexamples.size() < max_cx) a.counterexamples.push_back(cx);
    }
  }
  for (const auto& cx : part.other_failures) {
    if (into.other_failures.size() < max_cx) into.other_failures.push_back(cx);
  }
}

}  // namespace

const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& info : kLemmas) out.emplace_back(info.name);
    return out;
  }();
  return names;
}

const LemmaTally* LemmaReport::find(const std::string& name) const {
  for (const auto& t : lemmas) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::uint64_t LemmaReport::failures() const {
  std::uint64_t total = closed_form_mismatches + protocol_failures + shift_failures;
  for (const auto& t : lemmas) total += t.failed;
  return total;
}

void LemmaSuiteConfig::validate() const {
  if (k_min < 0 || k_max < k_min) throw ConfigError("invalid k range");
  if (k_max > cap) {
    throw ConfigError("lemma suite up to k=" + std::to_string(k_max) + " exceeds cap " +
                      std::to_string(cap));
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

LemmaReport check_lemma_suite(const LemmaSuiteConfig& cfg) {
  cfg.validate();
  auto report = empty_report(cfg.k_min, cfg.k_max);
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<LemmaReport> parts(static_cast<std::size_t>(n), empty_report(k, k));
    detail::parallel_for(parts.size(), cfg.jobs, [&](std::size_t s) {
      check_start_slot(k, static_cast<std::int64_t>(s), cfg, parts[s]);
    });
    for (const auto& part : parts) merge(report, part, cfg.max_counterexamples);
  }
  return report;
}

LemmaReport check_lemma_suite(int k) {
  LemmaSuiteConfig cfg;
  cfg.k_min = k;
  cfg.k_max = k;
  cfg.cap = cap_from_env("RBO_LEMMA_CAP", kDefaultLemmaCap);
  return check_lemma_suite(cfg);
}

}  // namespace rbo
