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

#include "rbo/verifier.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include "parallel.hpp"
#include "rbo/analysis.hpp"
#include "rbo/bitops.hpp"
#include "rbo/error.hpp"

namespace rbo {
namespace {

// A query in the compressed key domain together with its target bounds.
struct Candidate {
  std::int32_t lo;
  std::int32_t hi;
  std::int32_t r_lo;
  std::int32_t r_hi;
};

struct KeySet {
  std::vector<std::int64_t> raw;
  // 2 * (rank of the distinct value); odd values then sit strictly between
  // neighbouring groups, so every realizable target pair has a query.
  std::vector<std::int32_t> compressed;
};

std::mt19937_64 make_rng(std::uint64_t seed, int k, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

KeySet build_keys(const SweepConfig& cfg, int k) {
  const std::int64_t n = std::int64_t{1} << k;
  KeySet ks;
  switch (cfg.key_scheme) {
    case KeyScheme::kDistinct:
      for (std::int64_t i = 0; i < n; ++i) ks.raw.push_back(2 * i);
      break;
    case KeyScheme::kDuplicates: {
      auto rng = make_rng(cfg.seed, k, 0);
      std::bernoulli_distribution step(0.5);
      std::int64_t value = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        if (i > 0 && step(rng)) value += 2;
        ks.raw.push_back(value);
      }
      break;
    }
    case KeyScheme::kFile:
      ks.raw = cfg.explicit_keys;
      break;
  }
  (void)BroadcastCycle<std::int64_t>::from_keys(ks.raw);

  std::int32_t rank = 0;
  for (std::size_t i = 0; i < ks.raw.size(); ++i) {
    if (i > 0 && ks.raw[i] != ks.raw[i - 1]) ++rank;
    ks.compressed.push_back(2 * rank);
  }
  return ks;
}

Candidate candidate_for(const std::vector<std::int32_t>& keys, std::int32_t lo,
                        std::int32_t hi) {
  const auto r_lo = std::lower_bound(keys.begin(), keys.end(), lo) - keys.begin();
  const auto r_hi = std::upper_bound(keys.begin(), keys.end(), hi) - keys.begin() - 1;
  return {lo, hi, static_cast<std::int32_t>(r_lo), static_cast<std::int32_t>(r_hi)};
}

Candidate candidate_for_targets(std::int32_t r_lo, std::int32_t r_hi) {
  const std::int32_t lo = 2 * r_lo - 1;
  const std::int32_t hi = r_lo <= r_hi ? 2 * r_hi + 1 : lo;
  return {lo, hi, r_lo, r_hi};
}

bool distinct(const SweepConfig& cfg) { return cfg.key_scheme == KeyScheme::kDistinct; }

// Every realizable (r', r'') pair once, ordered by (r', r'').
std::vector<Candidate> all_targets(const SweepConfig& cfg, const KeySet& ks) {
  const auto n = static_cast<std::int32_t>(ks.compressed.size());
  std::vector<Candidate> out;
  if (distinct(cfg)) {
    for (std::int32_t r_lo = 0; r_lo <= n; ++r_lo) {
      for (std::int32_t r_hi = r_lo - 1; r_hi < n; ++r_hi) {
        out.push_back(candidate_for_targets(r_lo, r_hi));
      }
    }
    return out;
  }
  const std::int32_t top = ks.compressed.back() + 1;
  std::map<std::pair<std::int32_t, std::int32_t>, Candidate> unique;
  for (std::int32_t lo = -1; lo <= top; ++lo) {
    for (std::int32_t hi = lo; hi <= top; ++hi) {
      const auto c = candidate_for(ks.compressed, lo, hi);
      unique.try_emplace({c.r_lo, c.r_hi}, c);
    }
  }
  for (const auto& [key, c] : unique) out.push_back(c);
  return out;
}

struct Partial {
  KSummary summary;
  std::vector<Counterexample> counterexamples;
};

bool better(const Witness& candidate, const std::optional<Witness>& best,
            std::int64_t Witness::*field) {
  if (!best) return true;
  if (candidate.*field != (*best).*field) return candidate.*field > (*best).*field;
  return candidate.instance < best->instance;
}

void offer(std::optional<Witness>& best, const Witness& w, std::int64_t Witness::*field) {
  if (better(w, best, field)) best = w;
}

std::vector<std::string> replay_for(const KeySet& ks, const Instance& inst,
                                    const Candidate& c) {
  std::vector<std::string> lines;
  std::vector<std::int64_t> keys(ks.compressed.begin(), ks.compressed.end());
  const auto cycle = BroadcastCycle<std::int64_t>::from_keys(keys);
  const auto q = QueryInterval<std::int64_t>::make(c.lo, c.hi);
  lines.push_back("query (compressed keys) [" + std::to_string(c.lo) + ", " +
                  std::to_string(c.hi) + "]");
  const auto dec = decompose(inst.s, inst.k);
  for (const auto& seg : dec.segments) {
    lines.push_back("segment " + std::to_string(seg.index) + " t=" +
                    std::to_string(seg.start) + " l=" + std::to_string(seg.level) +
                    " beta=" + seg.beta.str());
  }
  std::ostringstream records;
  write_trace_records(records, run(cycle, q, inst.s));
  std::string line;
  std::istringstream in(records.str());
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void evaluate(const SweepConfig& cfg, const KeySet& ks, int k, std::int64_t s,
              const std::vector<Candidate>& batch, Partial& part) {
  kernels::QueryBatch queries;
  for (const auto& c : batch) queries.push_back(c.lo, c.hi, c.r_lo, c.r_hi);
  const auto stream = kernels::make_stream(ks.compressed, s);
  kernels::BatchResult res;
  kernels::run_batch(stream, queries, res, cfg.backend);

  auto& sum = part.summary;
  auto record = [&](const Instance& inst, const Candidate& c, std::string check,
                    std::string detail) {
    if (part.counterexamples.size() >= cfg.max_counterexamples) return;
    part.counterexamples.push_back(
        {inst, std::move(check), std::move(detail), replay_for(ks, inst, c)});
  };

  for (std::size_t lane = 0; lane < batch.size(); ++lane) {
    const auto& c = batch[lane];
    const Instance inst{k, s, c.r_lo, c.r_hi};
    const Witness w{inst, res.left[lane], res.right[lane],
                    std::int64_t{res.left[lane]} + res.right[lane]};
    ++sum.runs;
    sum.max_left = std::max(sum.max_left, w.left);
    sum.max_right = std::max(sum.max_right, w.right);
    sum.max_extra = std::max(sum.max_extra, w.extra);
    offer(sum.worst_left, w, &Witness::left);
    offer(sum.worst_right, w, &Witness::right);
    offer(sum.worst_extra, w, &Witness::extra);

    const std::string energies_text = "left=" + std::to_string(w.left) +
                                      " right=" + std::to_string(w.right) +
                                      " extra=" + std::to_string(w.extra);
    if (w.left > sum.bound_left()) {
      ++sum.left_violations;
      record(inst, c, "left-bound", energies_text);
    }
    if (w.right > sum.bound_right()) {
      ++sum.right_violations;
      record(inst, c, "right-bound", energies_text);
    }
    if (w.extra > sum.bound_extra()) {
      ++sum.extra_violations;
      record(inst, c, "extra-bound", energies_text);
    }
    if (k <= 1 && w.extra > 2) {
      ++sum.small_k_violations;
      record(inst, c, "small-k", energies_text);
    }
    if ((res.flags[lane] & (kernels::kLbMismatch | kernels::kUbMismatch)) != 0 ||
        res.cf_left[lane] != res.left[lane] || res.cf_right[lane] != res.right[lane]) {
      ++sum.closed_form_mismatches;
      record(inst, c, "closed-form", "flags=" + std::to_string(res.flags[lane]));
    }
    const std::int32_t expected_in_range = c.r_lo <= c.r_hi ? c.r_hi - c.r_lo + 1 : 0;
    if ((res.flags[lane] & kernels::kStrayInRange) != 0 ||
        res.in_range[lane] != expected_in_range || res.final_lb[lane] != c.r_lo ||
        res.final_ub[lane] != c.r_hi) {
      ++sum.protocol_failures;
      record(inst, c, "protocol",
             "in_range=" + std::to_string(res.in_range[lane]) + " final=[" +
                 std::to_string(res.final_lb[lane]) + ", " +
                 std::to_string(res.final_ub[lane]) + "]");
    }
  }
}

void merge(KSummary& into, const KSummary& part) {
  into.runs += part.runs;
  into.max_left = std::max(into.max_left, part.max_left);
  into.max_right = std::max(into.max_right, part.max_right);
  into.max_extra = std::max(into.max_extra, part.max_extra);
  if (part.worst_left) offer(into.worst_left, *part.worst_left, &Witness::left);
  if (part.worst_right) offer(into.worst_right, *part.worst_right, &Witness::right);
  if (part.worst_extra) offer(into.worst_extra, *part.worst_extra, &Witness::extra);
  into.left_violations += part.left_violations;
  into.right_violations += part.right_violations;
  into.extra_violations += part.extra_violations;
  into.small_k_violations += part.small_k_violations;
  into.closed_form_mismatches += part.closed_form_mismatches;
  into.protocol_failures += part.protocol_failures;
}

// (s, batch) work items for one k.
std::vector<std::pair<std::int64_t, std::vector<Candidate>>> plan(
    const SweepConfig& cfg, const KeySet& ks, int k) {
  const std::int64_t n = std::int64_t{1} << k;
  std::vector<std::pair<std::int64_t, std::vector<Candidate>>> items;

  if (cfg.mode == SweepMode::kExhaustive) {
    const auto targets = all_targets(cfg, ks);
    for (std::int64_t s = 0; s < n; ++s) items.emplace_back(s, targets);
    return items;
  }

  auto rng = make_rng(cfg.seed, k, 1);
  std::uniform_int_distribution<std::int64_t> pick_s(0, n - 1);
  std::uniform_int_distribution<std::int32_t> pick_bound(0, static_cast<std::int32_t>(n));
  const std::int32_t top = ks.compressed.back() + 1;
  std::uniform_int_distribution<std::int32_t> pick_key(-1, top);
  std::map<std::int64_t, std::vector<Candidate>> groups;
  for (std::uint64_t i = 0; i < cfg.samples; ++i) {
    const auto s = pick_s(rng);
    Candidate c{};
    if (distinct(cfg)) {
      std::int32_t a = 0, b = 0;
      do {
        a = pick_bound(rng);
        b = pick_bound(rng);
      } while (a > b);
      c = candidate_for_targets(a, b - 1);
    } else {
      std::int32_t lo = 0, hi = 0;
      do {
        lo = pick_key(rng);
        hi = pick_key(rng);
      } while (lo > hi);
      c = candidate_for(ks.compressed, lo, hi);
    }
    groups[s].push_back(c);
  }
  for (auto& [s, batch] : groups) items.emplace_back(s, std::move(batch));
  return items;
}

}  // namespace

std::string to_string(SweepMode mode) {
  return mode == SweepMode::kExhaustive ? "exhaustive" : "random";
}

std::string to_string(KeyScheme scheme) {
  switch (scheme) {
    case KeyScheme::kDistinct: return "distinct";
    case KeyScheme::kDuplicates: return "duplicates";
    case KeyScheme::kFile: return "file";
  }
  return "?";
}

int cap_from_env(const char* name, int fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 0 || value > kernels::kMaxK) {
    throw ConfigError(std::string(name) + " must be an integer in [0, " +
                      std::to_string(kernels::kMaxK) + "]");
  }
  return static_cast<int>(value);
}

void SweepConfig::validate() const {
  if (k_min < 0 || k_max < k_min) throw ConfigError("invalid k range");
  if (k_max > kernels::kMaxK) {
    throw ConfigError("k=" + std::to_string(k_max) + " exceeds the supported maximum " +
                      std::to_string(kernels::kMaxK));
  }
  if (mode == SweepMode::kExhaustive && k_max > exhaustive_cap) {
    throw ConfigError("exhaustive sweep up to k=" + std::to_string(k_max) +
                      " exceeds cap " + std::to_string(exhaustive_cap));
  }
  if (mode == SweepMode::kRandom && samples == 0) throw ConfigError("samples must be > 0");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (key_scheme == KeyScheme::kFile) {
    const auto len = explicit_keys.size();
    if (len == 0 || (len & (len - 1)) != 0) {
      throw ConfigError("keys file must hold a power-of-two number of keys");
    }
    const int k = std::countr_zero(len);
    if (k_min != k || k_max != k) {
      throw ConfigError("keys file fixes k=" + std::to_string(k));
    }
  }
  if (backend == kernels::Backend::kAvx2 && !kernels::avx2_available()) {
    throw ConfigError("AVX2 backend requested but unavailable");
  }
}

std::uint64_t SweepReport::runs() const {
  std::uint64_t total = 0;
  for (const auto& row : per_k) total += row.runs;
  return total;
}

std::uint64_t SweepReport::failures() const {
  std::uint64_t total = 0;
  for (const auto& row : per_k) total += row.failures();
  return total;
}

SweepReport sweep_bounds(const SweepConfig& cfg) {
  cfg.validate();
  SweepReport report;
  report.mode = cfg.mode;
  report.key_scheme = cfg.key_scheme;
  report.seed = cfg.seed;
  report.samples = cfg.mode == SweepMode::kRandom ? cfg.samples : 0;
  report.k_min = cfg.k_min;
  report.k_max = cfg.k_max;

  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const auto ks = build_keys(cfg, k);
    const auto items = plan(cfg, ks, k);
    std::vector<Partial> parts(items.size());
    detail::parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
      parts[i].summary.k = k;
      evaluate(cfg, ks, k, items[i].first, items[i].second, parts[i]);
    });

    KSummary row;
    row.k = k;
    row.n = std::int64_t{1} << k;
    for (const auto& part : parts) {
      merge(row, part.summary);
      for (const auto& cx : part.counterexamples) {
        if (report.counterexamples.size() < cfg.max_counterexamples) {
          report.counterexamples.push_back(cx);
        }
      }
    }
    report.per_k.push_back(std::move(row));
  }
  return report;
}

std::vector<KSummary> worst_case(const SweepConfig& cfg) {
  return sweep_bounds(cfg).per_k;
}

TargetQuery query_for_targets(std::int64_t n, std::int64_t r_lo, std::int64_t r_hi) {
  if (n < 1 || (n & (n - 1)) != 0) throw UsageError("n must be a power of two");
  if (r_lo < 0 || r_lo > r_hi + 1 || r_hi + 1 > n) {
    throw UsageError("infeasible targets (" + std::to_string(r_lo) + ", " +
                     std::to_string(r_hi) + ") for n=" + std::to_string(n));
  }
  TargetQuery out{{}, QueryInterval<std::int64_t>{0, 0}};
  for (std::int64_t i = 0; i < n; ++i) out.keys.push_back(2 * i);
  const std::int64_t lo = 2 * r_lo - 1;
  const std::int64_t hi = r_lo <= r_hi ? 2 * r_hi + 1 : lo;
  out.query = QueryInterval<std::int64_t>::make(lo, hi);
  return out;
}

bool closed_form_matches(const BoundsLedger& trace, TargetBounds targets) {
  const auto n = trace.n;
  const auto s = trace.start;
  if (static_cast<std::int64_t>(trace.lb_history.size()) != n + 1 ||
      static_cast<std::int64_t>(trace.ub_history.size()) != n + 1) {
    return false;
  }
  std::int64_t left_changes = 0;
  std::int64_t right_changes = 0;
  std::int64_t prev_lb = 0;
  std::int64_t prev_ub = n - 1;
  for (std::int64_t t = s; t <= s + n; ++t) {
    std::int64_t lb = 0;
    std::int64_t ub = n - 1;
    for (std::int64_t u = s; u <= t - 1; ++u) {
      const auto idx = static_cast<std::int64_t>(rev_k(u, trace.k));
      if (idx + 1 <= targets.lo) lb = std::max(lb, idx + 1);
      if (idx - 1 >= targets.hi) ub = std::min(ub, idx - 1);
    }
    const auto at = static_cast<std::size_t>(t - s);
    if (trace.lb_history[at] != lb || trace.ub_history[at] != ub) return false;
    if (lb != prev_lb) ++left_changes;
    if (ub != prev_ub) ++right_changes;
    prev_lb = lb;
    prev_ub = ub;
  }
  const auto e = energies(trace);
  return e.left == left_changes && e.right == right_changes;
}

}  // namespace rbo
