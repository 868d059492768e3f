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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "rbo/analysis.hpp"
#include "rbo/error.hpp"
#include "rbo/protocol.hpp"
#include "rbo/verifier.hpp"

using namespace rbo;

namespace {

std::int64_t pw(int e) { return std::int64_t{1} << e; }

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

TEST_CASE("decompose: worked example") {
  const auto dec = decompose(5, 3);
  REQUIRE(dec.segments.size() == 3);
  CHECK(dec.last() == 2);
  CHECK(dec[0].start == 5);
  CHECK(dec[1].start == 6);
  CHECK(dec[2].start == 8);
  CHECK(dec[0].level == 0);
  CHECK(dec[1].level == 1);
  CHECK(dec[2].level == 3);
  CHECK(dec[0].beta.str() == "(101)");
  CHECK(dec[1].beta.str() == "(11)");
  CHECK(dec[2].beta.empty());
  REQUIRE(dec[0].alpha);
  CHECK(dec[0].alpha->str() == "(1)");
  CHECK_FALSE(dec[1].alpha);
  CHECK_FALSE(dec[2].alpha);
  const auto x1 = x_image(dec[1]);
  CHECK(x1.front() == 3);
}

TEST_CASE("decompose: s = 0 and small cases") {
  for (int k = 0; k <= 6; ++k) {
    const auto dec = decompose(0, k);
    REQUIRE(dec.last() == 0);
    CHECK(dec[0].slots == Interval{0, pw(k) - 1});
  }
  const auto dec = decompose(1, 2);
  REQUIRE(dec.segments.size() == 3);
  CHECK(dec[0].start == 1);
  CHECK(dec[1].start == 2);
  CHECK(dec[2].start == 4);
  CHECK(dec[0].level == 0);
  CHECK(dec[1].level == 1);
  CHECK(dec[2].level == 2);
  CHECK_THROWS_AS(decompose(4, 2), UsageError);
  CHECK_THROWS_AS(decompose(-1, 2), UsageError);
}

TEST_CASE("decompose: structural invariants") {
  for (int k = 0; k <= 8; ++k) {
    for (std::int64_t s = 0; s < pw(k); ++s) {
      const auto dec = decompose(s, k);
      // Oracle: the recurrence evaluated directly.
      std::vector<std::int64_t> ts{s};
      std::vector<int> ls;
      while (true) {
        int l = 0;
        while (l < k && ts.back() % pw(l + 1) == 0) ++l;
        ls.push_back(l);
        if (l == k) break;
        ts.push_back(ts.back() + pw(l));
      }
      REQUIRE(dec.segments.size() == ts.size());
      std::int64_t next = s;
      for (int i = 0; i <= dec.last(); ++i) {
        const auto& seg = dec[i];
        REQUIRE(seg.start == ts[static_cast<std::size_t>(i)]);
        REQUIRE(seg.level == ls[static_cast<std::size_t>(i)]);
        REQUIRE(seg.slots.lo == next);
        REQUIRE(seg.slots.size() == pw(seg.level));
        REQUIRE(seg.k() == k);
        next = seg.slots.hi + 1;
        if (i > 0) REQUIRE(seg.level > dec[i - 1].level);
        // Every index of X_i ends in beta_i.
        const auto xs = x_image(seg);
        REQUIRE(static_cast<std::int64_t>(xs.size()) == seg.slots.size());
        for (auto x : xs) REQUIRE(mod(x, pw(k - seg.level)) ==
                                  static_cast<std::int64_t>(seg.beta.value()));
        // alpha: beta = (1)^(l_{i+1}-l_i) (0) alpha for i <= last-2.
        if (i + 2 <= dec.last()) {
          REQUIRE(seg.alpha);
          const int d = dec[i + 1].level - seg.level;
          const auto expect = concat(concat(ones(d), zeros(1)), *seg.alpha);
          REQUIRE(seg.beta == expect);
        } else {
          REQUIRE_FALSE(seg.alpha);
        }
      }
      REQUIRE(dec[dec.last()].level == k);
      // A full cycle has been covered once the final segment starts.
      REQUIRE(dec[dec.last()].slots.hi >= s + pw(k) - 1);
      if (s != 0) {
        const auto all = x_image(dec[dec.last()]);
        REQUIRE(static_cast<std::int64_t>(all.size()) == pw(k));
        for (std::int64_t x = 0; x < pw(k); ++x) REQUIRE(all[static_cast<std::size_t>(x)] == x);
      }
    }
  }
}

TEST_CASE("sublevel") {
  const auto dec = decompose(5, 4);  // t = 5, 6, 8, 16
  const auto& seg = dec[2];
  REQUIRE(seg.start == 8);
  REQUIRE(seg.level == 3);
  CHECK(sublevel(seg, 0) == Interval{8, 8});
  CHECK(sublevel(seg, 2) == Interval{10, 11});
  CHECK(sublevel(seg, 3) == Interval{12, 15});
  CHECK_THROWS_AS(sublevel(seg, 4), UsageError);
  CHECK_THROWS_AS(sublevel(seg, -1), UsageError);

  for (int k = 0; k <= 6; ++k) {
    for (std::int64_t s = 0; s < pw(k); ++s) {
      const auto d = decompose(s, k);
      for (const auto& sg : d.segments) {
        std::int64_t next = sg.start;
        for (int j = 0; j <= sg.level; ++j) {
          const auto y = sublevel(sg, j);
          REQUIRE(y.lo == next);
          next = y.hi + 1;
        }
        REQUIRE(next == sg.slots.hi + 1);
      }
    }
  }
}

TEST_CASE("x_image") {
  const auto dec = decompose(5, 3);
  CHECK(x_image(dec[0]) == std::vector<std::int64_t>{5});
  const auto d2 = decompose(3, 3);
  const auto all = x_image(d2[d2.last()]);
  CHECK(all.size() == 8);
  for (int k = 1; k <= 6; ++k) {
    for (std::int64_t s = 0; s < pw(k); ++s) {
      const auto d = decompose(s, k);
      for (const auto& seg : d.segments) {
        REQUIRE(x_image(seg, 0) ==
                std::vector<std::int64_t>{static_cast<std::int64_t>(rev_k(seg.start, k))});
        for (int j = 0; j <= seg.level; ++j) {
          // Oracle: rev_k of every slot in the sublevel, sorted.
          const auto y = sublevel(seg, j);
          std::vector<std::int64_t> want;
          for (auto t = y.lo; t <= y.hi; ++t) want.push_back(static_cast<std::int64_t>(rev_k(t, k)));
          std::sort(want.begin(), want.end());
          REQUIRE(x_image(seg, j) == want);
          // Bit characterization: bin_k(x) = rho (1) (0)^(l_i - j) beta_i for j >= 1.
          for (auto x : want) {
            if (j == 0) {
              REQUIRE(mod(x, pw(k - seg.level)) == static_cast<std::int64_t>(seg.beta.value()));
            } else {
              REQUIRE(mod(x, pw(k - j + 1)) ==
                      pw(k - j) + static_cast<std::int64_t>(seg.beta.value()));
            }
          }
        }
      }
    }
  }
  CHECK(x_image(Interval{0, 3}, 2) == std::vector<std::int64_t>{0, 1, 2, 3});
}

TEST_CASE("in_extension") {
  for (int k = 1; k <= 6; ++k) {
    for (std::int64_t s = 0; s < pw(k); ++s) {
      const auto d = decompose(s, k);
      for (const auto& seg : d.segments) {
        const auto xs = x_image(seg);
        const auto lo = xs.front();
        CHECK(in_extension(lo, seg));
        CHECK(in_extension(lo + pw(k - seg.level), seg));
        CHECK(in_extension(lo - 3 * pw(k - seg.level), seg));
        if (k - seg.level >= 1) CHECK_FALSE(in_extension(lo + 1, seg));
        for (std::int64_t x = 0; x < pw(k); ++x) {
          const bool in_x = std::binary_search(xs.begin(), xs.end(), x);
          REQUIRE(in_extension(x, seg) == in_x);
          for (int j = 0; j <= seg.level; ++j) {
            bool in_union = false;
            for (int jj = 0; jj <= j; ++jj) {
              const auto part = x_image(seg, jj);
              in_union = in_union || std::binary_search(part.begin(), part.end(), x);
            }
            REQUIRE(in_extension(x, seg, j) == in_union);
          }
        }
      }
    }
  }
}

TEST_CASE("class extrema") {
  CHECK(class_max_below(1, 1, 2) == 1);
  CHECK(class_max_below(0, 2, 0) == -4);
  CHECK(class_min_above(3, 2, 3) == 7);
  CHECK(class_min_above(1, 3, -5) == 1);
  for (std::int64_t b = -20; b <= 20; ++b) {
    for (int w = 0; w <= 4; ++w) {
      for (std::int64_t r = 0; r < pw(w); ++r) {
        std::int64_t below = std::numeric_limits<std::int64_t>::min();
        std::int64_t above = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t x = -60; x <= 60; ++x) {
          if (mod(x, pw(w)) != r) continue;
          if (x < b) below = std::max(below, x);
          if (x > b) above = std::min(above, x);
        }
        REQUIRE(class_max_below(r, w, b) == below);
        REQUIRE(class_min_above(r, w, b) == above);
      }
    }
  }
}

TEST_CASE("side_quantities: hand trace") {
  const auto c = cycle_new(std::vector<std::int64_t>{10, 20, 30, 40});
  const auto trace = run(c, QueryInterval<std::int64_t>::make(25, 35), 1);
  const auto dec = decompose(1, 2);
  const auto left = side_quantities(dec, trace, 2, Side::kLeft);
  CHECK(left.first_update == 2);
  REQUIRE(left.segments.size() == 3);
  CHECK(left.segments[1].m[1] == 1);
  CHECK(left.segments[1].p[1] == 1);
  const auto right = side_quantities(dec, trace, 2, Side::kRight);
  CHECK(right.first_update == 3);
  CHECK(right.segments[1].m[1] == 3);
  CHECK(right.segments[1].p[1] == 3);

  CHECK_THROWS_AS(side_quantities(decompose(0, 2), trace, 2, Side::kLeft), UsageError);
  CHECK_THROWS_AS(side_quantities(decompose(1, 3), trace, 2, Side::kLeft), UsageError);
}

TEST_CASE("side_quantities: brute-force oracle") {
  for (int k = 0; k <= 4; ++k) {
    const auto n = pw(k);
    for (std::int64_t s = 0; s < n; ++s) {
      const auto dec = decompose(s, k);
      for (std::int64_t a = 0; a <= n; ++a) {
        for (std::int64_t b = a - 1; b < n; ++b) {
          const auto tq = query_for_targets(n, a, b);
          const auto trace = run(cycle_new(tq.keys), tq.query, s);
          const auto left = side_quantities(dec, trace, a, Side::kLeft);
          const auto right = side_quantities(dec, trace, b, Side::kRight);
          REQUIRE(left.segments.size() == dec.segments.size());
          for (int i = 0; i <= dec.last(); ++i) {
            const auto& seg = dec[i];
            const auto& lq = left.segments[static_cast<std::size_t>(i)];
            const auto& rq = right.segments[static_cast<std::size_t>(i)];
            for (int j = 0; j <= seg.level; ++j) {
              const auto y = sublevel(seg, j);
              std::int64_t m_left = std::numeric_limits<std::int64_t>::min();
              std::int64_t m_right = std::numeric_limits<std::int64_t>::max();
              for (auto t = y.lo; t <= y.hi; ++t) {
                m_left = std::max(m_left, trace.lb_before(t + 1) - 1);
                m_right = std::min(m_right, trace.ub_before(t + 1) + 1);
              }
              std::int64_t p_left = std::numeric_limits<std::int64_t>::min();
              std::int64_t p_right = std::numeric_limits<std::int64_t>::max();
              for (std::int64_t x = -2 * n - 2; x <= 3 * n + 2; ++x) {
                if (!in_extension(x, seg, j)) continue;
                if (x < a) p_left = std::max(p_left, x);
                if (x > b) p_right = std::min(p_right, x);
              }
              REQUIRE(lq.m[static_cast<std::size_t>(j)] == m_left);
              REQUIRE(rq.m[static_cast<std::size_t>(j)] == m_right);
              REQUIRE(lq.p[static_cast<std::size_t>(j)] == p_left);
              REQUIRE(rq.p[static_cast<std::size_t>(j)] == p_right);
            }
            REQUIRE(lq.m_segment == lq.m.back());
            REQUIRE(lq.x == floor_div_pow2(lq.p_segment, k - seg.level));
            REQUIRE(rq.x == floor_div_pow2(rq.p_segment, k - seg.level));
          }
        }
      }
    }
  }
}

TEST_CASE("gamma") {
  const auto dec = decompose(5, 3);
  CHECK(gamma(dec, 0).str() == "(0)");
  CHECK(gamma(dec, 1).str() == "(01)");
  CHECK_THROWS_AS(gamma(dec, 2), UsageError);
  CHECK_THROWS_AS(gamma(dec, -1), UsageError);
  const auto d = decompose(1, 4);  // t = 1, 2, 4, 8, 16
  for (int j = 0; j < d.last(); ++j) CHECK(gamma(d, j).str() == "(0)");
  const auto jump = decompose(8, 5);  // t = 8 (l 3), 16 (l 4), 32 (l 5)
  CHECK(gamma(jump, 0).str() == "(0)");
  const auto wide = decompose(7, 5);  // t = 7 (l 0), 8 (l 3), 16, 32
  CHECK(wide[1].level - wide[0].level == 3);
  CHECK(gamma(wide, 0).str() == "(011)");
}
