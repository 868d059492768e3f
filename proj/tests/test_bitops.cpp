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
#include <random>
#include <string>
#include <vector>

#include "rbo/bitops.hpp"
#include "rbo/error.hpp"

using namespace rbo;

namespace {

// Independent oracle: k-digit string of x, reversed with std::reverse.
std::uint64_t rev_by_string(std::uint64_t x, int k) {
  std::string s;
  for (int i = k - 1; i >= 0; --i) s.push_back(((x >> i) & 1U) ? '1' : '0');
  std::reverse(s.begin(), s.end());
  return s.empty() ? 0 : std::stoull(s, nullptr, 2);
}

}  // namespace

TEST_CASE("bin_fixed") {
  CHECK(bin_fixed(5, 4).str() == "(0101)");
  CHECK(bin_fixed(0, 0).empty());
  CHECK(bin_fixed(0, 0).str() == "()");
  CHECK(bin_fixed(13, 2).str() == "(01)");
  CHECK(bin_fixed(~0ULL, 64).size() == 64);
  CHECK(to_value(bin_fixed(~0ULL, 64)) == ~0ULL);
  CHECK_THROWS_AS(bin_fixed(1, 65), InvalidWidth);
  CHECK_THROWS_AS(bin_fixed(1, -1), InvalidWidth);
}

TEST_CASE("bin is the shortest representation") {
  CHECK(bin(0).empty());
  CHECK(bin(1).str() == "(1)");
  CHECK(bin(6).str() == "(110)");
}

TEST_CASE("to_value") {
  CHECK(to_value(BitString::parse("(0101)")) == 5);
  CHECK(to_value(BitString()) == 0);
  CHECK(to_value(BitString::parse("1111")) == 15);
}

TEST_CASE("parse and digit access") {
  const auto a = BitString::parse("(0110)");
  CHECK(a.size() == 4);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);
  CHECK(a[3] == 0);
  CHECK(a.prefix(2).str() == "(01)");
  CHECK(a.suffix(3).str() == "(110)");
  CHECK(a.suffix(0).empty());
  CHECK(BitString::parse("()").empty());
  CHECK_THROWS(BitString::parse("(012)"));
  CHECK_THROWS(a[4]);
}

TEST_CASE("reverse") {
  CHECK(reverse(BitString::parse("(01)")).str() == "(10)");
  CHECK(reverse(BitString()).empty());
  CHECK(reverse(BitString::parse("(110)")).str() == "(011)");
}

TEST_CASE("concat and repeat") {
  CHECK(concat(BitString::parse("(01)"), BitString::parse("(11)")).str() == "(0111)");
  CHECK(repeat(BitString::parse("(1)"), 4).str() == "(1111)");
  CHECK(repeat(BitString::parse("(10)"), 0).empty());
  CHECK(zeros(3).str() == "(000)");
  CHECK(ones(2).str() == "(11)");
  CHECK_THROWS_AS(concat(ones(40), ones(25)), InvalidWidth);
  CHECK_THROWS_AS(repeat(ones(10), 7), InvalidWidth);
}

TEST_CASE("rev_k examples") {
  for (int k = 1; k <= 63; ++k) CHECK(rev_k(1, k) == (1ULL << (k - 1)));
  for (int k = 0; k <= 63; ++k) CHECK(rev_k(0, k) == 0);
  CHECK(rev_k(6, 3) == 3);
  // x is taken mod 2^k, negative x included.
  CHECK(rev_k(9, 3) == rev_k(1, 3));
  CHECK(rev_k(-1, 3) == 7);
  CHECK(rev_k(-3, 2) == rev_k(1, 2));
}

TEST_CASE("rev_k is an involution and a bijection for k <= 16") {
  for (int k = 0; k <= 16; ++k) {
    const std::uint64_t n = 1ULL << k;
    std::vector<char> hit(n, 0);
    for (std::uint64_t x = 0; x < n; ++x) {
      const auto y = rev_k(static_cast<std::int64_t>(x), k);
      REQUIRE(y < n);
      REQUIRE(rev_k(static_cast<std::int64_t>(y), k) == x);
      hit[y] = 1;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](char c) { return c == 1; }));
  }
}

TEST_CASE("rev_k agrees with string reversal") {
  for (int k = 0; k <= 12; ++k) {
    for (std::uint64_t x = 0; x < (1ULL << k); ++x) {
      REQUIRE(rev_k(static_cast<std::int64_t>(x), k) == rev_by_string(x, k));
      REQUIRE(rev_k_reference(static_cast<std::int64_t>(x), k) == rev_by_string(x, k));
    }
  }
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20000; ++trial) {
    const int k = static_cast<int>(rng() % 64);
    const auto x = static_cast<std::int64_t>(rng());
    const auto residue = k == 0 ? 0 : static_cast<std::uint64_t>(x) & ((1ULL << k) - 1);
    REQUIRE(rev_k(x, k) == rev_k_reference(x, k));
    REQUIRE(rev_k(x, k) == rev_by_string(residue, k));
  }
}

TEST_CASE("mod_pow2 and floor_div_pow2 use floor semantics") {
  CHECK(mod_pow2(-1, 3) == 7);
  CHECK(mod_pow2(13, 2) == 1);
  CHECK(mod_pow2(5, 0) == 0);
  CHECK(floor_div_pow2(-1, 2) == -1);
  CHECK(floor_div_pow2(-4, 2) == -1);
  CHECK(floor_div_pow2(-5, 2) == -2);
  CHECK(floor_div_pow2(7, 1) == 3);
  for (std::int64_t x = -40; x <= 40; ++x) {
    for (int k = 0; k <= 5; ++k) {
      const std::int64_t w = std::int64_t{1} << k;
      REQUIRE(floor_div_pow2(x, k) * w + mod_pow2(x, k) == x);
      REQUIRE(mod_pow2(x, k) >= 0);
      REQUIRE(mod_pow2(x, k) < w);
    }
  }
}

TEST_CASE("trailing_zero_run") {
  CHECK(trailing_zero_run(8, 3) == 3);
  CHECK(trailing_zero_run(5, 3) == 0);
  CHECK(trailing_zero_run(0, 7) == 7);
  CHECK(trailing_zero_run(12, 10) == 2);
  // Oracle: scan l = cap .. 0.
  for (std::uint64_t t = 0; t < 200; ++t) {
    for (int cap = 0; cap <= 9; ++cap) {
      int want = 0;
      for (int l = cap; l >= 0; --l) {
        if (t % (1ULL << l) == 0) {
          want = l;
          break;
        }
      }
      REQUIRE(trailing_zero_run(t, cap) == want);
    }
  }
}
