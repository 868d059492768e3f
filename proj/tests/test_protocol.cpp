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

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rbo/error.hpp"
#include "rbo/protocol.hpp"

using namespace rbo;

namespace {

const std::vector<std::int64_t> kKeys{10, 20, 30, 40};

std::int64_t rev_naive(std::int64_t t, int k) {
  std::int64_t r = 0;
  for (int i = 0; i < k; ++i) r |= ((t >> i) & 1) << (k - 1 - i);
  return r;
}

// Independent simulator: returns (left, right, in-range, final lb, final ub).
struct Sim {
  std::set<std::int64_t> left, right;
  std::int64_t in_range = 0, lb = 0, ub = 0;
};
Sim simulate(const std::vector<std::int64_t>& keys, std::int64_t lo, std::int64_t hi,
             std::int64_t s) {
  const auto n = static_cast<std::int64_t>(keys.size());
  int k = 0;
  while ((std::int64_t{1} << k) < n) ++k;
  Sim sim;
  sim.ub = n - 1;
  for (std::int64_t t = s; t < s + n && sim.lb <= sim.ub; ++t) {
    const auto i = rev_naive(t % n, k);
    if (i < sim.lb || i > sim.ub) continue;
    const auto key = keys[static_cast<std::size_t>(i)];
    if (key < lo) {
      sim.lb = i + 1;
      sim.left.insert(i);
    } else if (key > hi) {
      sim.ub = i - 1;
      sim.right.insert(i);
    } else {
      ++sim.in_range;
    }
  }
  return sim;
}

}  // namespace

TEST_CASE("cycle_new") {
  const auto c = cycle_new(kKeys);
  CHECK(c.k() == 2);
  CHECK(c.n() == 4);
  const auto one = cycle_new(std::vector<std::int64_t>{7});
  CHECK(one.k() == 0);
  CHECK(one.n() == 1);
  CHECK_THROWS_AS(cycle_new(std::vector<std::int64_t>{3, 1, 2, 4}), OrderError);
  CHECK_THROWS_AS(cycle_new(std::vector<std::int64_t>{1, 2, 3}), ShapeError);
  CHECK_THROWS_AS(cycle_new(std::vector<std::int64_t>{}), ShapeError);
  CHECK_NOTHROW(cycle_new(std::vector<std::int64_t>{1, 1, 2, 2}));
}

TEST_CASE("query interval") {
  CHECK_THROWS_AS(QueryInterval<std::int64_t>::make(5, 4), UsageError);
  CHECK_THROWS_AS(QueryInterval<double>::make(0.0, 1.0 / 0.0), UsageError);
  CHECK_NOTHROW(QueryInterval<double>::make(-1.5, -1.5));
}

TEST_CASE("message_at") {
  const auto c = cycle_new(kKeys);
  CHECK(message_at(c, 1).index == 2);
  CHECK(message_at(c, 1).key == 30);
  CHECK(message_at(c, 0).index == 0);
  CHECK(message_at(c, 0).key == 10);
  CHECK(message_at(c, 3).index == 3);
  CHECK(message_at(c, 3).key == 40);
  CHECK(message_at(c, 5).index == 2);  // the cycle repeats
}

TEST_CASE("target_bounds") {
  const auto c = cycle_new(kKeys);
  auto tb = [&](std::int64_t lo, std::int64_t hi) {
    return target_bounds(c, QueryInterval<std::int64_t>::make(lo, hi));
  };
  CHECK(tb(25, 35) == TargetBounds{2, 2});
  CHECK(tb(-5, -1) == TargetBounds{0, -1});
  CHECK(tb(-5, -1).empty());
  CHECK(tb(0, 100) == TargetBounds{0, 3});
  CHECK(tb(41, 50) == TargetBounds{4, 3});
  CHECK(tb(20, 20) == TargetBounds{1, 1});

  // Linear-scan oracle over keys with duplicates.
  const std::vector<std::int64_t> dup{1, 1, 3, 3, 3, 5, 8, 8};
  const auto d = cycle_new(dup);
  for (std::int64_t lo = 0; lo <= 9; ++lo) {
    for (std::int64_t hi = lo; hi <= 9; ++hi) {
      const auto got = target_bounds(d, QueryInterval<std::int64_t>::make(lo, hi));
      std::int64_t want_lo = 8, want_hi = -1;
      for (std::int64_t r = 7; r >= 0; --r) {
        if (lo <= dup[static_cast<std::size_t>(r)]) want_lo = r;
      }
      for (std::int64_t r = 0; r < 8; ++r) {
        if (dup[static_cast<std::size_t>(r)] <= hi) want_hi = r;
      }
      REQUIRE(got == TargetBounds{want_lo, want_hi});
      for (std::int64_t r = 0; r < 8; ++r) {
        const auto key = dup[static_cast<std::size_t>(r)];
        REQUIRE((lo <= key && key <= hi) == (got.lo <= r && r <= got.hi));
      }
    }
  }
}

TEST_CASE("receiver_step") {
  const auto c = cycle_new(kKeys);
  const auto q = QueryInterval<std::int64_t>::make(25, 35);

  ReceiverState st{0, 3, false};
  auto ev = receiver_step(st, 2, c, q);
  REQUIRE(ev);
  CHECK(ev->kind == EventKind::kLbUpdate);
  CHECK(st.lb == 2);

  st = {2, 2, false};
  CHECK_FALSE(receiver_step(st, 4, c, q));
  CHECK(st.lb == 2);
  CHECK(st.ub == 2);

  st = {0, 3, false};
  ev = receiver_step(st, 1, c, q);
  REQUIRE(ev);
  CHECK(ev->kind == EventKind::kInRange);
  CHECK(st.lb == 0);
  CHECK(st.ub == 3);

  st.done = true;
  CHECK_THROWS_AS(receiver_step(st, 0, c, q), UsageError);
}

TEST_CASE("run: hand trace") {
  const auto c = cycle_new(kKeys);
  const auto trace = run(c, QueryInterval<std::int64_t>::make(25, 35), 1);
  REQUIRE(trace.events.size() == 3);
  CHECK(trace.events[0].slot == 1);
  CHECK(trace.events[0].index == 2);
  CHECK(trace.events[0].kind == EventKind::kInRange);
  CHECK(trace.events[1].slot == 2);
  CHECK(trace.events[1].kind == EventKind::kLbUpdate);
  CHECK(trace.events[2].slot == 3);
  CHECK(trace.events[2].kind == EventKind::kUbUpdate);
  CHECK(trace.lb_history == std::vector<std::int64_t>{0, 0, 2, 2, 2});
  CHECK(trace.ub_history == std::vector<std::int64_t>{3, 3, 3, 2, 2});
  CHECK(trace.first_left == 2);
  CHECK(trace.first_right == 3);
  CHECK_FALSE(trace.empty_slot);
  CHECK(energies(trace) == Energies{1, 1, 2, 3});

  std::ostringstream out;
  write_trace_records(out, trace);
  CHECK(out.str() ==
        "slot,index,key,kind\n1,2,30,in-range\n2,1,20,lb-update\n3,3,40,ub-update\n");
}

TEST_CASE("run: empty target is detected early") {
  const auto c = cycle_new(kKeys);
  const auto trace = run(c, QueryInterval<std::int64_t>::make(11, 12), 0);
  REQUIRE(trace.empty_slot);
  CHECK(*trace.empty_slot < trace.end());
  CHECK(trace.lb_history.back() > trace.ub_history.back());
  CHECK(trace.events.back().kind == EventKind::kEmptyDetected);
  for (const auto& ev : trace.events) CHECK(ev.slot <= *trace.empty_slot);
}

TEST_CASE("run: full-range query never updates") {
  const auto c = cycle_new(kKeys);
  for (std::int64_t s = 0; s < 4; ++s) {
    const auto trace = run(c, QueryInterval<std::int64_t>::make(0, 100), s);
    CHECK(energies(trace) == Energies{0, 0, 0, 4});
    CHECK(trace.events.size() == 4);
  }
}

TEST_CASE("run normalizes the start slot") {
  const auto c = cycle_new(kKeys);
  const auto q = QueryInterval<std::int64_t>::make(25, 35);
  CHECK(run(c, q, 5).start == 1);
  CHECK(run(c, q, -3).start == 1);
  CHECK(energies(run(c, q, 9)) == energies(run(c, q, 1)));
}

TEST_CASE("run matches an independent simulator on random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const int k = static_cast<int>(rng() % 7);
    const std::int64_t n = std::int64_t{1} << k;
    std::vector<std::int64_t> keys;
    std::int64_t v = static_cast<std::int64_t>(rng() % 5);
    for (std::int64_t i = 0; i < n; ++i) {
      keys.push_back(v);
      v += static_cast<std::int64_t>(rng() % 3);  // duplicates allowed
    }
    std::int64_t lo = static_cast<std::int64_t>(rng() % 40) - 5;
    std::int64_t hi = lo + static_cast<std::int64_t>(rng() % 20);
    const auto s = static_cast<std::int64_t>(rng() % 64);
    const auto c = cycle_new(keys);
    const auto trace = run(c, QueryInterval<std::int64_t>::make(lo, hi), s);
    const auto sim = simulate(keys, lo, hi, s % n);
    const auto e = energies(trace);
    REQUIRE(e.left == static_cast<std::int64_t>(sim.left.size()));
    REQUIRE(e.right == static_cast<std::int64_t>(sim.right.size()));
    REQUIRE(e.total == e.left + e.right + sim.in_range);
    REQUIRE(trace.lb_history.back() == sim.lb);
    REQUIRE(trace.ub_history.back() == sim.ub);
    // Histories move monotonically and change only at recorded slots.
    for (std::size_t i = 1; i < trace.lb_history.size(); ++i) {
      REQUIRE(trace.lb_history[i] >= trace.lb_history[i - 1]);
      REQUIRE(trace.ub_history[i] <= trace.ub_history[i - 1]);
    }
    // Without early termination the final bounds are the targets.
    const auto tb = target_bounds(c, QueryInterval<std::int64_t>::make(lo, hi));
    if (!trace.empty_slot) {
      REQUIRE(trace.lb_history.back() == tb.lo);
      REQUIRE(trace.ub_history.back() == tb.hi);
    } else {
      REQUIRE(tb.empty());
    }
  }
}

TEST_CASE("run is deterministic") {
  const std::vector<std::int64_t> keys{1, 2, 2, 5, 7, 7, 7, 9};
  const auto c = cycle_new(keys);
  const auto q = QueryInterval<std::int64_t>::make(2, 6);
  const auto a = run(c, q, 3);
  const auto b = run(c, q, 3);
  std::ostringstream oa, ob;
  write_trace_records(oa, a);
  write_trace_records(ob, b);
  CHECK(oa.str() == ob.str());
  CHECK(a.lb_history == b.lb_history);
}

TEST_CASE("floating-point keys") {
  const auto c = cycle_new(std::vector<double>{0.5, 1.5, 2.5, 3.5});
  const auto trace = run(c, QueryInterval<double>::make(1.0, 3.0), 2);
  const auto e = energies(trace);
  CHECK(e.left + e.right + 2 == e.total);
}
