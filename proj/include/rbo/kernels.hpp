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

// Batched receiver kernels.
//
// A batch runs many receivers that listen to the same cycle from the same
// start slot, each with its own query. The slot stream (index, key) is shared,
// so every lane executes the same instruction sequence on its own (lb, ub)
// pair; the AVX2 variant packs eight lanes per register. Alongside the state
// machine, each lane tracks the closed-form bounds (running max/min of the
// updates a receiver with known targets would make) and flags any slot where
// the two disagree.
//
// The scalar kernel is the reference; the vector kernel must agree with it bit
// for bit.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rbo::kernels {

// Largest k the 32-bit lanes can represent.
inline constexpr int kMaxK = 30;

struct SlotStream {
  int k = 0;
  std::vector<std::int32_t> index;  // rev_k(t) for t = s .. s+n-1
  std::vector<std::int32_t> key;    // keys[index]

  std::size_t size() const { return index.size(); }
};

// Stream for a cycle of ascending 32-bit keys heard from slot s.
SlotStream make_stream(std::span<const std::int32_t> keys, std::int64_t s);

struct QueryBatch {
  std::vector<std::int32_t> lo;         // query.lo
  std::vector<std::int32_t> hi;         // query.hi
  std::vector<std::int32_t> target_lo;  // r'
  std::vector<std::int32_t> target_hi;  // r''

  std::size_t size() const { return lo.size(); }
  void push_back(std::int32_t q_lo, std::int32_t q_hi, std::int32_t r_lo,
                 std::int32_t r_hi) {
    lo.push_back(q_lo);
    hi.push_back(q_hi);
    target_lo.push_back(r_lo);
    target_hi.push_back(r_hi);
  }
};

enum Flag : std::uint32_t {
  kLbMismatch = 1U,     // lb differs from the closed form after some slot
  kUbMismatch = 2U,     // ub differs from the closed form after some slot
  kStrayInRange = 4U,   // an in-range report for an index outside [r', r'']
};

struct BatchResult {
  std::vector<std::int32_t> left;      // lb changes
  std::vector<std::int32_t> right;     // ub changes
  std::vector<std::int32_t> in_range;  // in-range receptions
  std::vector<std::int32_t> final_lb;
  std::vector<std::int32_t> final_ub;
  std::vector<std::int32_t> cf_left;   // changes of the closed-form lb
  std::vector<std::int32_t> cf_right;  // changes of the closed-form ub
  std::vector<std::uint32_t> flags;

  void resize(std::size_t lanes);
  std::size_t size() const { return left.size(); }
  friend bool operator==(const BatchResult&, const BatchResult&) = default;
};

enum class Backend { kAuto, kScalar, kAvx2 };

std::string_view to_string(Backend backend);

// True when the AVX2 kernel was compiled in and the CPU supports it.
bool avx2_available();

// kAuto resolves to the widest available backend.
Backend resolve(Backend requested);

void run_batch_scalar(const SlotStream& stream, const QueryBatch& queries,
                      BatchResult& out);

// Throws rbo::ConfigError when AVX2 is unavailable.
void run_batch_avx2(const SlotStream& stream, const QueryBatch& queries,
                    BatchResult& out);

void run_batch(const SlotStream& stream, const QueryBatch& queries,
               BatchResult& out, Backend backend = Backend::kAuto);

namespace detail {
// Scalar lanes [first, last); shared with the vector kernel for tails.
void run_lanes_scalar(const SlotStream& stream, const QueryBatch& queries,
                      BatchResult& out, std::size_t first, std::size_t last);
#if defined(RBO_HAVE_AVX2)
void run_batch_avx2_impl(const SlotStream& stream, const QueryBatch& queries,
                         BatchResult& out);
#endif
}  // namespace detail

}  // namespace rbo::kernels
