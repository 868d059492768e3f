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

#include <algorithm>
#include <bit>
#include <string>

#include "rbo/bitops.hpp"
#include "rbo/error.hpp"
#include "rbo/kernels.hpp"

namespace rbo::kernels {

SlotStream make_stream(std::span<const std::int32_t> keys, std::int64_t s) {
  const auto n = static_cast<std::int64_t>(keys.size());
  const int k = std::countr_zero(static_cast<std::uint64_t>(n));
  if (n == 0 || (n & (n - 1)) != 0) throw ShapeError("cycle length not a power of two");
  if (k > kMaxK) throw ConfigError("k=" + std::to_string(k) + " exceeds kernel limit");

  SlotStream stream;
  stream.k = k;
  stream.index.resize(static_cast<std::size_t>(n));
  stream.key.resize(static_cast<std::size_t>(n));
  const auto start = mod_pow2(s, k);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = rev_k(start + i, k);
    stream.index[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(idx);
    stream.key[static_cast<std::size_t>(i)] = keys[idx];
  }
  return stream;
}

void BatchResult::resize(std::size_t lanes) {
  for (auto* v : {&left, &right, &in_range, &final_lb, &final_ub, &cf_left, &cf_right}) {
    v->assign(lanes, 0);
  }
  flags.assign(lanes, 0U);
}

namespace detail {

void run_lanes_scalar(const SlotStream& stream, const QueryBatch& queries,
                      BatchResult& out, std::size_t first, std::size_t last) {
  const auto n = static_cast<std::int32_t>(stream.size());
  for (std::size_t lane = first; lane < last; ++lane) {
    const auto lo = queries.lo[lane];
    const auto hi = queries.hi[lane];
    const auto r_lo = queries.target_lo[lane];
    const auto r_hi = queries.target_hi[lane];

    std::int32_t lb = 0, ub = n - 1, cf_lb = 0, cf_ub = n - 1;
    std::int32_t left = 0, right = 0, in_range = 0, cf_left = 0, cf_right = 0;
    std::uint32_t flags = 0;

    for (std::size_t i = 0; i < stream.size(); ++i) {
      const auto idx = stream.index[i];
      const auto key = stream.key[i];
      if (lb <= idx && idx <= ub) {
        if (key < lo) {
          lb = idx + 1;
          ++left;
        } else if (key > hi) {
          ub = idx - 1;
          ++right;
        } else {
          ++in_range;
          if (idx < r_lo || idx > r_hi) flags |= kStrayInRange;
        }
      }
      if (idx + 1 <= r_lo && idx + 1 > cf_lb) {
        cf_lb = idx + 1;
        ++cf_left;
      }
      if (idx - 1 >= r_hi && idx - 1 < cf_ub) {
        cf_ub = idx - 1;
        ++cf_right;
      }
      if (lb != cf_lb) flags |= kLbMismatch;
      if (ub != cf_ub) flags |= kUbMismatch;
    }

    out.left[lane] = left;
    out.right[lane] = right;
    out.in_range[lane] = in_range;
    out.final_lb[lane] = lb;
    out.final_ub[lane] = ub;
    out.cf_left[lane] = cf_left;
    out.cf_right[lane] = cf_right;
    out.flags[lane] = flags;
  }
}

}  // namespace detail

void run_batch_scalar(const SlotStream& stream, const QueryBatch& queries,
                      BatchResult& out) {
  out.resize(queries.size());
  detail::run_lanes_scalar(stream, queries, out, 0, queries.size());
}

}  // namespace rbo::kernels
