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

// Exhaustive and randomized verification of the receiver's energy bounds and
// of the per-segment statements they are built from.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbo/kernels.hpp"
#include "rbo/protocol.hpp"

namespace rbo {

enum class SweepMode { kExhaustive, kRandom };
enum class KeyScheme { kDistinct, kDuplicates, kFile };

std::string to_string(SweepMode mode);
std::string to_string(KeyScheme scheme);

// Exhaustive cap used when RBO_EXHAUSTIVE_CAP is unset.
inline constexpr int kDefaultExhaustiveCap = 8;
// Lemma-suite cap used when RBO_LEMMA_CAP is unset.
inline constexpr int kDefaultLemmaCap = 6;

// Reads an integer cap from the environment, falling back to `fallback`.
// Throws ConfigError on a malformed value.
int cap_from_env(const char* name, int fallback);

struct SweepConfig {
  int k_min = 2;
  int k_max = 2;
  SweepMode mode = SweepMode::kExhaustive;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  KeyScheme key_scheme = KeyScheme::kDistinct;
  std::vector<std::int64_t> explicit_keys;  // KeyScheme::kFile
  int exhaustive_cap = kDefaultExhaustiveCap;
  int jobs = 1;
  kernels::Backend backend = kernels::Backend::kAuto;
  std::size_t max_counterexamples = 16;

  // Throws ConfigError.
  void validate() const;
};

// One receiver run: cycle size 2^k, start slot s, target bounds (r', r'').
struct Instance {
  int k = 0;
  std::int64_t s = 0;
  std::int64_t r_lo = 0;
  std::int64_t r_hi = -1;

  friend auto operator<=>(const Instance&, const Instance&) = default;
};

struct Witness {
  Instance instance;
  std::int64_t left = 0;
  std::int64_t right = 0;
  std::int64_t extra = 0;
};

struct Counterexample {
  Instance instance;
  std::string check;
  std::string detail;
  // Replay material: query, decomposition and event records.
  std::vector<std::string> replay;
};

struct KSummary {
  int k = 0;
  std::int64_t n = 1;
  std::uint64_t runs = 0;
  std::int64_t max_left = 0;
  std::int64_t max_right = 0;
  std::int64_t max_extra = 0;
  std::optional<Witness> worst_left;
  std::optional<Witness> worst_right;
  std::optional<Witness> worst_extra;
  std::uint64_t left_violations = 0;
  std::uint64_t right_violations = 0;
  std::uint64_t extra_violations = 0;
  std::uint64_t small_k_violations = 0;  // left + right > 2 for k <= 1
  std::uint64_t closed_form_mismatches = 0;
  std::uint64_t protocol_failures = 0;

  std::int64_t bound_left() const { return k + 1; }
  std::int64_t bound_right() const { return k + 2; }
  std::int64_t bound_extra() const { return 2 * k + 3; }
  std::int64_t previous_bound() const { return 4 * k + 2; }
  std::uint64_t failures() const {
    return left_violations + right_violations + extra_violations +
           small_k_violations + closed_form_mismatches + protocol_failures;
  }
  bool passed() const { return failures() == 0; }
};

struct SweepReport {
  SweepMode mode = SweepMode::kExhaustive;
  KeyScheme key_scheme = KeyScheme::kDistinct;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  int k_min = 0;
  int k_max = 0;
  std::vector<KSummary> per_k;
  std::vector<Counterexample> counterexamples;  // first max_counterexamples

  std::uint64_t runs() const;
  std::uint64_t failures() const;
  bool passed() const { return failures() == 0; }
};

// Runs every configured instance through the batch kernel and tallies
// energies, bound checks, closed-form agreement and protocol correctness.
SweepReport sweep_bounds(const SweepConfig& cfg);

// Per-k maxima with the lexicographically smallest (s, r', r'') attaining
// them. Reported only; nothing is asserted about tightness.
std::vector<KSummary> worst_case(const SweepConfig& cfg);

// Keys 2i (i < n) and a query whose target bounds are exactly (r', r''):
// [2r'-1, 2r''+1], or [2r'-1, 2r'-1] when r'' = r'-1.
// Throws UsageError unless 0 <= r' <= r''+1 <= n.
struct TargetQuery {
  std::vector<std::int64_t> keys;
  QueryInterval<std::int64_t> query;
};
TargetQuery query_for_targets(std::int64_t n, std::int64_t r_lo, std::int64_t r_hi);

// Recomputes lb_t / ub_t for every t in [start, start+n] directly from their
// defining max/min over earlier slots and compares with the trace; also
// compares the number of changes in the recomputed histories with the
// trace's change ledger.
bool closed_form_matches(const BoundsLedger& trace, TargetBounds targets);

template <std::totally_ordered Key>
bool closed_form_crosscheck(const BoundsLedger& trace,
                            const BroadcastCycle<Key>& cycle,
                            const QueryInterval<Key>& q) {
  if (trace.k != cycle.k()) return false;
  return closed_form_matches(trace, target_bounds(cycle, q));
}

// Completeness and final-state checks for one trace: every index of
// [r', r''] reported in range exactly once, nothing else reported in range,
// final bounds equal to the targets. Returns a failure description or
// nothing.
template <std::totally_ordered Key>
std::optional<std::string> protocol_violation(const ReceiverTrace<Key>& trace,
                                              TargetBounds targets) {
  std::vector<int> seen(static_cast<std::size_t>(trace.n), 0);
  for (const auto& ev : trace.events) {
    if (ev.kind != EventKind::kInRange) continue;
    if (ev.index < targets.lo || ev.index > targets.hi) {
      return "index " + std::to_string(ev.index) + " reported in range outside targets";
    }
    if (++seen[static_cast<std::size_t>(ev.index)] > 1) {
      return "index " + std::to_string(ev.index) + " reported twice";
    }
  }
  for (auto r = targets.lo; r <= targets.hi; ++r) {
    if (seen[static_cast<std::size_t>(r)] != 1) {
      return "target index " + std::to_string(r) + " never reported";
    }
  }
  if (trace.lb_history.back() != targets.lo || trace.ub_history.back() != targets.hi) {
    return "final bounds [" + std::to_string(trace.lb_history.back()) + ", " +
           std::to_string(trace.ub_history.back()) + "] differ from targets";
  }
  return std::nullopt;
}

struct LemmaTally {
  std::string name;
  std::string statement;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::uint64_t vacuous = 0;
  std::uint64_t failed = 0;
  std::vector<Counterexample> counterexamples;

  double vacuity() const {
    return checked == 0 ? 1.0 : static_cast<double>(vacuous) / static_cast<double>(checked);
  }
};

struct LemmaReport {
  int k_min = 0;
  int k_max = 0;
  std::uint64_t instances = 0;
  std::uint64_t restarts = 0;
  std::uint64_t closed_form_mismatches = 0;
  std::uint64_t protocol_failures = 0;
  std::uint64_t shift_failures = 0;
  std::vector<LemmaTally> lemmas;
  std::vector<Counterexample> other_failures;

  const LemmaTally* find(const std::string& name) const;
  std::uint64_t failures() const;
  bool passed() const { return failures() == 0; }
};

struct LemmaSuiteConfig {
  int k_min = 2;
  int k_max = 2;
  int cap = kDefaultLemmaCap;
  int jobs = 1;
  std::size_t max_counterexamples = 8;

  void validate() const;
};

// Every (s, r', r'') for each k, with distinct keys. Each instance is also
// re-run from its own first lb-update slot and first ub-update slot so the
// statements conditioned on "first update at the start slot" are exercised.
LemmaReport check_lemma_suite(const LemmaSuiteConfig& cfg);
LemmaReport check_lemma_suite(int k);

// Names of the checked statements, in report order.
const std::vector<std::string>& lemma_names();

}  // namespace rbo
