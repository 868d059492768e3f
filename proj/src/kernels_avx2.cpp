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

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "rbo/kernels.hpp"

namespace rbo::kernels::detail {
namespace {

inline __m256i load(const std::vector<std::int32_t>& v, std::size_t at) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + at));
}

inline void store(std::vector<std::int32_t>& v, std::size_t at, __m256i x) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(v.data() + at), x);
}

}  // namespace

void run_batch_avx2_impl(const SlotStream& stream, const QueryBatch& queries,
                         BatchResult& out) {
  constexpr std::size_t kLanes = 8;
  const std::size_t lanes = queries.size();
  const std::size_t vector_end = lanes - lanes % kLanes;
  const auto n = static_cast<std::int32_t>(stream.size());
  const __m256i all_ones = _mm256_set1_epi32(-1);

  for (std::size_t base = 0; base < vector_end; base += kLanes) {
    const __m256i lo = load(queries.lo, base);
    const __m256i hi = load(queries.hi, base);
    const __m256i r_lo = load(queries.target_lo, base);
    const __m256i r_hi = load(queries.target_hi, base);

    __m256i lb = _mm256_setzero_si256();
    __m256i ub = _mm256_set1_epi32(n - 1);
    __m256i cf_lb = lb;
    __m256i cf_ub = ub;
    __m256i left = _mm256_setzero_si256();
    __m256i right = left, in_range = left, cf_left = left, cf_right = left;
    __m256i lb_bad = left, ub_bad = left, stray = left;

    for (std::size_t i = 0; i < stream.size(); ++i) {
      const std::int32_t idx_s = stream.index[i];
      const __m256i idx = _mm256_set1_epi32(idx_s);
      const __m256i key = _mm256_set1_epi32(stream.key[i]);
      const __m256i next = _mm256_set1_epi32(idx_s + 1);
      const __m256i prev = _mm256_set1_epi32(idx_s - 1);

      // on: lb <= idx <= ub
      const __m256i off = _mm256_or_si256(_mm256_cmpgt_epi32(lb, idx),
                                          _mm256_cmpgt_epi32(idx, ub));
      const __m256i on = _mm256_xor_si256(off, all_ones);
      const __m256i below = _mm256_cmpgt_epi32(lo, key);
      const __m256i above = _mm256_cmpgt_epi32(key, hi);

      const __m256i raise = _mm256_and_si256(on, below);
      const __m256i lower = _mm256_andnot_si256(below, _mm256_and_si256(on, above));
      const __m256i inside = _mm256_andnot_si256(_mm256_or_si256(below, above), on);

      lb = _mm256_blendv_epi8(lb, next, raise);
      ub = _mm256_blendv_epi8(ub, prev, lower);
      left = _mm256_sub_epi32(left, raise);
      right = _mm256_sub_epi32(right, lower);
      in_range = _mm256_sub_epi32(in_range, inside);

      const __m256i outside = _mm256_or_si256(_mm256_cmpgt_epi32(r_lo, idx),
                                              _mm256_cmpgt_epi32(idx, r_hi));
      stray = _mm256_or_si256(stray, _mm256_and_si256(inside, outside));

      // closed form: next <= r_lo && next > cf_lb
      const __m256i cf_raise = _mm256_andnot_si256(_mm256_cmpgt_epi32(next, r_lo),
                                                   _mm256_cmpgt_epi32(next, cf_lb));
      // prev >= r_hi && prev < cf_ub
      const __m256i cf_lower = _mm256_andnot_si256(_mm256_cmpgt_epi32(r_hi, prev),
                                                   _mm256_cmpgt_epi32(cf_ub, prev));
      cf_lb = _mm256_blendv_epi8(cf_lb, next, cf_raise);
      cf_ub = _mm256_blendv_epi8(cf_ub, prev, cf_lower);
      cf_left = _mm256_sub_epi32(cf_left, cf_raise);
      cf_right = _mm256_sub_epi32(cf_right, cf_lower);

      lb_bad = _mm256_or_si256(lb_bad, _mm256_xor_si256(_mm256_cmpeq_epi32(lb, cf_lb), all_ones));
      ub_bad = _mm256_or_si256(ub_bad, _mm256_xor_si256(_mm256_cmpeq_epi32(ub, cf_ub), all_ones));
    }

    const __m256i flags = _mm256_or_si256(
        _mm256_or_si256(_mm256_and_si256(lb_bad, _mm256_set1_epi32(kLbMismatch)),
                        _mm256_and_si256(ub_bad, _mm256_set1_epi32(kUbMismatch))),
        _mm256_and_si256(stray, _mm256_set1_epi32(kStrayInRange)));

    store(out.left, base, left);
    store(out.right, base, right);
    store(out.in_range, base, in_range);
    store(out.final_lb, base, lb);
    store(out.final_ub, base, ub);
    store(out.cf_left, base, cf_left);
    store(out.cf_right, base, cf_right);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.flags.data() + base), flags);
  }

  run_lanes_scalar(stream, queries, out, vector_end, lanes);
}

}  // namespace rbo::kernels::detail
