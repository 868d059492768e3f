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

#include "rbo/bitops.hpp"

#include <algorithm>
#include <bit>

#include "rbo/error.hpp"

namespace rbo {
namespace {

constexpr std::uint64_t low_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

void check_width(int width) {
  if (width < 0 || width > BitString::kMaxWidth) {
    throw InvalidWidth("bit width " + std::to_string(width) +
                       " outside [0, 64]");
  }
}

void check_exponent(int k) {
  if (k < 0 || k > 63) {
    throw InvalidWidth("exponent " + std::to_string(k) + " outside [0, 63]");
  }
}

}  // namespace

BitString BitString::parse(std::string_view text) {
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  check_width(static_cast<int>(std::min<std::size_t>(text.size(), 65)));
  std::uint64_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InvalidWidth("not a binary digit: '" + std::string(1, c) + "'");
    }
    bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return BitString(bits, static_cast<int>(text.size()));
}

int BitString::operator[](int pos) const {
  if (pos < 0 || pos >= size_) {
    throw UsageError("digit position out of range");
  }
  return static_cast<int>((bits_ >> (size_ - 1 - pos)) & 1U);
}

BitString BitString::prefix(int len) const {
  if (len < 0 || len > size_) throw UsageError("prefix longer than string");
  return bin_fixed(len == 0 ? 0 : bits_ >> (size_ - len), len);
}

BitString BitString::suffix(int len) const {
  if (len < 0 || len > size_) throw UsageError("suffix longer than string");
  return bin_fixed(bits_, len);
}

std::string BitString::str() const {
  std::string out = "(";
  for (int i = 0; i < size_; ++i) out.push_back((*this)[i] ? '1' : '0');
  out.push_back(')');
  return out;
}

BitString bin_fixed(std::uint64_t x, int width) {
  check_width(width);
  return BitString(x & low_mask(width), width);
}

BitString bin(std::uint64_t x) {
  return bin_fixed(x, static_cast<int>(std::bit_width(x)));
}

std::uint64_t to_value(const BitString& a) { return a.value(); }

BitString reverse(const BitString& a) {
  std::uint64_t out = 0;
  for (int i = a.size() - 1; i >= 0; --i) {
    out = (out << 1) | static_cast<std::uint64_t>(a[i]);
  }
  return BitString(out, a.size());
}

BitString concat(const BitString& a, const BitString& b) {
  const int width = a.size() + b.size();
  if (width > BitString::kMaxWidth) {
    throw InvalidWidth("concatenation of " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()) + " digits exceeds 64");
  }
  // a.size() < 64 here unless b is empty.
  const std::uint64_t high = b.size() == 0 ? a.value() : a.value() << b.size();
  return BitString(high | b.value(), width);
}

BitString repeat(const BitString& a, int copies) {
  if (copies < 0) throw UsageError("negative repeat count");
  if (static_cast<long long>(a.size()) * copies > BitString::kMaxWidth) {
    throw InvalidWidth("repetition exceeds 64 digits");
  }
  BitString out;
  for (int i = 0; i < copies; ++i) out = concat(out, a);
  return out;
}

BitString zeros(int count) { return repeat(bin_fixed(0, 1), count); }
BitString ones(int count) { return repeat(bin_fixed(1, 1), count); }

std::int64_t mod_pow2(std::int64_t x, int k) {
  check_exponent(k);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) & low_mask(k));
}

std::int64_t floor_div_pow2(std::int64_t x, int k) {
  check_exponent(k);
  // Arithmetic right shift rounds toward negative infinity.
  return x >> k;
}

std::uint64_t rev_k(std::int64_t x, int k) {
  check_exponent(k);
  if (k == 0) return 0;
  std::uint64_t v = static_cast<std::uint64_t>(x);
  v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
  v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
  v = ((v >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((v & 0x0F0F0F0F0F0F0F0FULL) << 4);
  v = ((v >> 8) & 0x00FF00FF00FF00FFULL) | ((v & 0x00FF00FF00FF00FFULL) << 8);
  v = ((v >> 16) & 0x0000FFFF0000FFFFULL) | ((v & 0x0000FFFF0000FFFFULL) << 16);
  v = (v >> 32) | (v << 32);
  return v >> (64 - k);
}

std::uint64_t rev_k_reference(std::int64_t x, int k) {
  check_exponent(k);
  return to_value(reverse(bin_fixed(static_cast<std::uint64_t>(mod_pow2(x, k)), k)));
}

int trailing_zero_run(std::uint64_t t, int cap) {
  check_exponent(cap);
  if (t == 0) return cap;
  return std::min(cap, std::countr_zero(t));
}

}  // namespace rbo
