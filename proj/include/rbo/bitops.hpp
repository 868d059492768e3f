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

#include <cstdint>
#include <string>
#include <string_view>

namespace rbo {

// Binary string of at most 64 digits, most significant digit first.
//
// Digits are packed into the low `size()` bits of a 64-bit word; digit 0 (the
// first one written) is the most significant of those bits. The empty string
// is valid and has value 0.
class BitString {
 public:
  static constexpr int kMaxWidth = 64;

  BitString() = default;

  // Parses a string of '0'/'1' characters, optionally wrapped in parentheses
  // ("(0101)" or "0101").
  static BitString parse(std::string_view text);

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Digit at `pos`, counting from the most significant end.
  int operator[](int pos) const;

  // Value of the digits read as an unsigned binary number.
  std::uint64_t value() const { return bits_; }

  // First / last `len` digits.
  BitString prefix(int len) const;
  BitString suffix(int len) const;

  // Rendering in the "(0101)" notation; the empty string renders as "()".
  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  BitString(std::uint64_t bits, int size) : bits_(bits), size_(size) {}

  friend BitString bin_fixed(std::uint64_t x, int width);
  friend BitString concat(const BitString& a, const BitString& b);
  friend BitString reverse(const BitString& a);

  std::uint64_t bits_ = 0;
  int size_ = 0;
};

// The `width`-digit binary representation of x mod 2^width.
// Throws InvalidWidth unless 0 <= width <= 64.
BitString bin_fixed(std::uint64_t x, int width);

// Shortest binary representation of x (empty for 0).
BitString bin(std::uint64_t x);

std::uint64_t to_value(const BitString& a);

// Digit-by-digit reversal.
BitString reverse(const BitString& a);

// Throws InvalidWidth when the combined length exceeds 64.
BitString concat(const BitString& a, const BitString& b);

// `copies` concatenated copies of `a`; empty for copies == 0.
BitString repeat(const BitString& a, int copies);

BitString zeros(int count);
BitString ones(int count);

// x mod 2^k as a mathematical (non-negative) residue. Requires 0 <= k <= 63.
std::int64_t mod_pow2(std::int64_t x, int k);

// Floor of x / 2^k for any sign of x. Requires 0 <= k <= 63.
std::int64_t floor_div_pow2(std::int64_t x, int k);

// k-bit reversal: the value of the reversed k-digit representation of
// x mod 2^k. Bit-trick implementation; requires 0 <= k <= 63.
std::uint64_t rev_k(std::int64_t x, int k);

// Same mapping computed through BitString reversal. Kept as the reference
// the fast path is tested against.
std::uint64_t rev_k_reference(std::int64_t x, int k);

// Largest l <= cap with t mod 2^l == 0, i.e. the trailing-zero run of t
// clipped to `cap` (cap itself for t == 0).
int trailing_zero_run(std::uint64_t t, int cap);

}  // namespace rbo
