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

// Broadcaster schedule and receiver state machine.
//
// The broadcaster sends, at slot t, the key whose index in the sorted key
// sequence is rev_k(t). The receiver keeps an index window [lb, ub] known to
// contain every index whose key lies in the query interval, powers its radio
// only for slots whose index falls in the window, and narrows the window
// whenever it hears a key outside the query.

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbo/bitops.hpp"
#include "rbo/error.hpp"

namespace rbo {

template <std::totally_ordered Key>
class BroadcastCycle {
 public:
  // Validates that the length is a power of two and the keys ascend
  // (duplicates allowed).
  static BroadcastCycle from_keys(std::vector<Key> keys) {
    const auto len = keys.size();
    if (len == 0 || !std::has_single_bit(len)) {
      throw ShapeError("cycle length " + std::to_string(len) +
                       " is not a power of two");
    }
    if (len > (std::size_t{1} << 62)) throw ShapeError("cycle too long");
    for (std::size_t i = 0; i + 1 < len; ++i) {
      if (keys[i + 1] < keys[i]) {
        throw OrderError("keys not ascending at index " + std::to_string(i));
      }
    }
    return BroadcastCycle(std::move(keys));
  }

  int k() const { return k_; }
  std::int64_t n() const { return static_cast<std::int64_t>(keys_.size()); }
  const std::vector<Key>& keys() const { return keys_; }
  const Key& key(std::int64_t index) const {
    return keys_[static_cast<std::size_t>(index)];
  }

 private:
  explicit BroadcastCycle(std::vector<Key> keys)
      : keys_(std::move(keys)),
        k_(std::countr_zero(keys_.size())) {}

  std::vector<Key> keys_;
  int k_ = 0;
};

template <std::totally_ordered Key>
BroadcastCycle<Key> cycle_new(std::vector<Key> keys) {
  return BroadcastCycle<Key>::from_keys(std::move(keys));
}

// Closed key interval [lo, hi] requested by the receiver.
template <std::totally_ordered Key>
struct QueryInterval {
  Key lo;
  Key hi;

  static QueryInterval make(Key lo, Key hi) {
    if constexpr (std::floating_point<Key>) {
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw UsageError("query endpoints must be finite");
      }
    }
    if (hi < lo) throw UsageError("query interval has lo > hi");
    return QueryInterval{std::move(lo), std::move(hi)};
  }
};

template <std::totally_ordered Key>
struct Message {
  std::int64_t index;
  Key key;
};

// Message transmitted at slot t (any integer; the cycle repeats every n).
template <std::totally_ordered Key>
Message<Key> message_at(const BroadcastCycle<Key>& cycle, std::int64_t t) {
  const auto index = static_cast<std::int64_t>(rev_k(t, cycle.k()));
  return {index, cycle.key(index)};
}

// Target index bounds: `lo` is the first index whose key is >= query.lo (n if
// none), `hi` the last index whose key is <= query.hi (-1 if none). The
// indices with keys inside the query are exactly [lo, hi]; the result is
// empty iff lo == hi + 1.
struct TargetBounds {
  std::int64_t lo;
  std::int64_t hi;

  bool empty() const { return lo > hi; }
  friend bool operator==(const TargetBounds&, const TargetBounds&) = default;
};

template <std::totally_ordered Key>
TargetBounds target_bounds(const BroadcastCycle<Key>& cycle,
                           const QueryInterval<Key>& q) {
  const auto& keys = cycle.keys();
  const auto lo = std::lower_bound(keys.begin(), keys.end(), q.lo) - keys.begin();
  const auto hi = std::upper_bound(keys.begin(), keys.end(), q.hi) - keys.begin();
  return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi) - 1};
}

struct ReceiverState {
  std::int64_t lb = 0;
  std::int64_t ub = 0;
  bool done = false;

  static ReceiverState initial(std::int64_t n) { return {0, n - 1, false}; }
};

enum class EventKind { kInRange, kLbUpdate, kUbUpdate, kEmptyDetected };

inline std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kInRange: return "in-range";
    case EventKind::kLbUpdate: return "lb-update";
    case EventKind::kUbUpdate: return "ub-update";
    case EventKind::kEmptyDetected: return "empty-detected";
  }
  return "?";
}

template <std::totally_ordered Key>
struct ReceptionEvent {
  std::int64_t slot;
  std::int64_t index;
  Key key;
  EventKind kind;
};

struct SlotChange {
  std::int64_t slot;
  std::int64_t index;
};

// Index-level record of one receiver run over slots [start, start + n - 1].
// Everything the analysis needs lives here, independent of the key type.
struct BoundsLedger {
  int k = 0;
  std::int64_t n = 1;
  std::int64_t start = 0;
  // lb/ub just before slot t, for t = start .. start + n.
  std::vector<std::int64_t> lb_history;
  std::vector<std::int64_t> ub_history;
  // Slots at which lb (resp. ub) changed, with the index received there.
  std::vector<SlotChange> left_changes;
  std::vector<SlotChange> right_changes;
  std::optional<std::int64_t> first_left;
  std::optional<std::int64_t> first_right;
  std::optional<std::int64_t> empty_slot;
  // Radio-on receptions.
  std::int64_t receptions = 0;

  std::int64_t end() const { return start + n; }

  // Values before slot t for any t. Before the start the receiver holds its
  // initial window; after the window the bounds no longer move.
  std::int64_t lb_before(std::int64_t t) const {
    if (t <= start) return lb_history.front();
    if (t >= end()) return lb_history.back();
    return lb_history[static_cast<std::size_t>(t - start)];
  }
  std::int64_t ub_before(std::int64_t t) const {
    if (t <= start) return ub_history.front();
    if (t >= end()) return ub_history.back();
    return ub_history[static_cast<std::size_t>(t - start)];
  }
};

template <std::totally_ordered Key>
struct ReceiverTrace : BoundsLedger {
  std::vector<ReceptionEvent<Key>> events;
};

// One slot of the receiver. Returns the reception, or nothing when the index
// is outside [lb, ub] and the radio stays off. Sets `done` once lb > ub.
template <std::totally_ordered Key>
std::optional<ReceptionEvent<Key>> receiver_step(ReceiverState& state,
                                                 std::int64_t t,
                                                 const BroadcastCycle<Key>& cycle,
                                                 const QueryInterval<Key>& q) {
  if (state.done) throw UsageError("receiver already finished");
  const auto msg = message_at(cycle, t);
  if (msg.index < state.lb || msg.index > state.ub) return std::nullopt;

  EventKind kind = EventKind::kInRange;
  if (msg.key < q.lo) {
    state.lb = msg.index + 1;
    kind = EventKind::kLbUpdate;
  } else if (q.hi < msg.key) {
    state.ub = msg.index - 1;
    kind = EventKind::kUbUpdate;
  }
  if (state.lb > state.ub) state.done = true;
  return ReceptionEvent<Key>{t, msg.index, msg.key, kind};
}

// Runs the receiver for n slots starting at s (reduced mod n).
template <std::totally_ordered Key>
ReceiverTrace<Key> run(const BroadcastCycle<Key>& cycle,
                       const QueryInterval<Key>& q, std::int64_t s) {
  ReceiverTrace<Key> trace;
  trace.k = cycle.k();
  trace.n = cycle.n();
  trace.start = mod_pow2(s, cycle.k());
  trace.lb_history.reserve(static_cast<std::size_t>(trace.n) + 1);
  trace.ub_history.reserve(static_cast<std::size_t>(trace.n) + 1);

  auto state = ReceiverState::initial(cycle.n());
  trace.lb_history.push_back(state.lb);
  trace.ub_history.push_back(state.ub);
  for (std::int64_t t = trace.start; t < trace.end(); ++t) {
    if (!state.done) {
      if (auto ev = receiver_step(state, t, cycle, q)) {
        ++trace.receptions;
        if (ev->kind == EventKind::kLbUpdate) {
          trace.left_changes.push_back({t, ev->index});
          if (!trace.first_left) trace.first_left = t;
        } else if (ev->kind == EventKind::kUbUpdate) {
          trace.right_changes.push_back({t, ev->index});
          if (!trace.first_right) trace.first_right = t;
        }
        trace.events.push_back(*ev);
        if (state.done) {
          trace.empty_slot = t;
          trace.events.push_back({t, ev->index, ev->key, EventKind::kEmptyDetected});
        }
      }
    }
    trace.lb_history.push_back(state.lb);
    trace.ub_history.push_back(state.ub);
  }
  return trace;
}

struct Energies {
  std::int64_t left = 0;
  std::int64_t right = 0;
  std::int64_t extra = 0;
  std::int64_t total = 0;

  friend bool operator==(const Energies&, const Energies&) = default;
};

// Left/right energy are the sizes of the unions of the per-slot change sets;
// extra is their sum, total counts every radio-on reception.
inline Energies energies(const BoundsLedger& trace) {
  std::set<std::int64_t> left;
  std::set<std::int64_t> right;
  for (const auto& c : trace.left_changes) left.insert(c.index);
  for (const auto& c : trace.right_changes) right.insert(c.index);
  Energies e;
  e.left = static_cast<std::int64_t>(left.size());
  e.right = static_cast<std::int64_t>(right.size());
  e.extra = e.left + e.right;
  e.total = trace.receptions;
  return e;
}

// Line-oriented record format: a header, then "slot,index,key,kind" per event.
template <std::totally_ordered Key>
void write_trace_records(std::ostream& out, const ReceiverTrace<Key>& trace) {
  out << "slot,index,key,kind\n";
  for (const auto& ev : trace.events) {
    out << ev.slot << ',' << ev.index << ',' << ev.key << ',' << to_string(ev.kind)
        << '\n';
  }
}

}  // namespace rbo
