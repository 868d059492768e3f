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

#include "rbo/error.hpp"
#include "rbo/kernels.hpp"

namespace rbo::kernels {

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::kAuto: return "auto";
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
  }
  return "?";
}

bool avx2_available() {
#if defined(RBO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported;
#else
  return false;
#endif
}

Backend resolve(Backend requested) {
  if (requested != Backend::kAuto) return requested;
  return avx2_available() ? Backend::kAvx2 : Backend::kScalar;
}

void run_batch_avx2(const SlotStream& stream, const QueryBatch& queries,
                    BatchResult& out) {
#if defined(RBO_HAVE_AVX2)
  if (!avx2_available()) throw ConfigError("AVX2 not supported by this CPU");
  out.resize(queries.size());
  detail::run_batch_avx2_impl(stream, queries, out);
#else
  (void)stream;
  (void)queries;
  (void)out;
  throw ConfigError("AVX2 kernel not compiled in");
#endif
}

void run_batch(const SlotStream& stream, const QueryBatch& queries,
               BatchResult& out, Backend backend) {
  if (resolve(backend) == Backend::kAvx2) {
    run_batch_avx2(stream, queries, out);
  } else {
    run_batch_scalar(stream, queries, out);
  }
}

}  // namespace rbo::kernels
