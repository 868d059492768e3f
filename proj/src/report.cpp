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

#include "rbo/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "rbo/bitops.hpp"

namespace rbo {
namespace {

Json instance_json(const Instance& inst) {
  return Json{{"k", inst.k}, {"s", inst.s}, {"r_lo", inst.r_lo}, {"r_hi", inst.r_hi}};
}

Json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  Json j = instance_json(w->instance);
  j["left"] = w->left;
  j["right"] = w->right;
  j["extra"] = w->extra;
  return j;
}

Json counterexample_json(const Counterexample& cx) {
  return Json{{"instance", instance_json(cx.instance)},
              {"check", cx.check},
              {"detail", cx.detail},
              {"replay", cx.replay}};
}

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

std::string witness_text(const std::optional<Witness>& w) {
  if (!w) return "-";
  return "s=" + std::to_string(w->instance.s) + " r'=" + std::to_string(w->instance.r_lo) +
         " r''=" + std::to_string(w->instance.r_hi) + " (left=" + std::to_string(w->left) +
         " right=" + std::to_string(w->right) + ")";
}

}  // namespace

Json to_json(const SweepReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.per_k) {
    rows.push_back(Json{
        {"k", row.k},
        {"n", row.n},
        {"runs", row.runs},
        {"max_left", row.max_left},
        {"max_right", row.max_right},
        {"max_extra", row.max_extra},
        {"bound_left", row.bound_left()},
        {"bound_right", row.bound_right()},
        {"bound_extra", row.bound_extra()},
        {"previous_bound", row.previous_bound()},
        {"margin_to_bound", row.bound_extra() - row.max_extra},
        {"margin_to_previous_bound", row.previous_bound() - row.max_extra},
        {"left_violations", row.left_violations},
        {"right_violations", row.right_violations},
        {"extra_violations", row.extra_violations},
        {"small_k_violations", row.small_k_violations},
        {"closed_form_mismatches", row.closed_form_mismatches},
        {"protocol_failures", row.protocol_failures},
        {"worst_left", witness_json(row.worst_left)},
        {"worst_right", witness_json(row.worst_right)},
        {"worst_extra", witness_json(row.worst_extra)},
        {"verdict", verdict(row.passed())},
    });
  }
  Json cxs = Json::array();
  for (const auto& cx : report.counterexamples) cxs.push_back(counterexample_json(cx));
  return Json{{"mode", to_string(report.mode)},
              {"key_scheme", to_string(report.key_scheme)},
              {"seed", report.seed},
              {"samples", report.samples},
              {"k_min", report.k_min},
              {"k_max", report.k_max},
              {"runs", report.runs()},
              {"per_k", rows},
              {"failures", report.failures()},
              {"counterexamples", cxs},
              {"verdict", verdict(report.passed())}};
}

void write_csv(std::ostream& out, const SweepReport& report) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : report.per_k) {
    out << row.k << ',' << row.runs << ',' << row.max_left << ',' << row.max_right << ','
        << row.max_extra << ',' << row.bound_left() << ',' << row.bound_right() << ','
        << row.bound_extra() << ',' << verdict(row.passed()) << '\n';
  }
}

void write_text(std::ostream& out, const SweepReport& report) {
  out << "mode=" << to_string(report.mode) << " keys=" << to_string(report.key_scheme)
      << " seed=" << report.seed;
  if (report.mode == SweepMode::kRandom) out << " samples=" << report.samples;
  out << '\n';
  out << std::left << std::setw(4) << "k" << std::setw(12) << "runs" << std::setw(10)
      << "left" << std::setw(10) << "right" << std::setw(10) << "extra" << std::setw(10)
      << "4k+2" << "verdict\n";
  for (const auto& row : report.per_k) {
    auto pair = [](std::int64_t got, std::int64_t bound) {
      return std::to_string(got) + "/" + std::to_string(bound);
    };
    out << std::setw(4) << row.k << std::setw(12) << row.runs << std::setw(10)
        << pair(row.max_left, row.bound_left()) << std::setw(10)
        << pair(row.max_right, row.bound_right()) << std::setw(10)
        << pair(row.max_extra, row.bound_extra()) << std::setw(10) << row.previous_bound()
        << verdict(row.passed()) << '\n';
  }
  for (const auto& row : report.per_k) {
    out << "k=" << row.k << " worst extra: " << witness_text(row.worst_extra) << '\n';
  }
  out << "runs=" << report.runs() << " failures=" << report.failures() << '\n';
  for (const auto& cx : report.counterexamples) {
    out << "counterexample " << cx.check << " k=" << cx.instance.k << " s=" << cx.instance.s
        << " r'=" << cx.instance.r_lo << " r''=" << cx.instance.r_hi << ": " << cx.detail << '\n';
  }
  out << std::right;
}

Json to_json(const LemmaReport& report) {
  Json lemmas = Json::array();
  for (const auto& t : report.lemmas) {
    Json cxs = Json::array();
    for (const auto& cx : t.counterexamples) cxs.push_back(counterexample_json(cx));
    lemmas.push_back(Json{{"name", t.name},
                          {"statement", t.statement},
                          {"checked", t.checked},
                          {"passed", t.passed},
                          {"vacuous", t.vacuous},
                          {"failed", t.failed},
                          {"counterexamples", cxs}});
  }
  Json other = Json::array();
  for (const auto& cx : report.other_failures) other.push_back(counterexample_json(cx));
  return Json{{"k_min", report.k_min},
              {"k_max", report.k_max},
              {"instances", report.instances},
              {"restarts", report.restarts},
              {"closed_form_mismatches", report.closed_form_mismatches},
              {"protocol_failures", report.protocol_failures},
              {"shift_failures", report.shift_failures},
              {"lemmas", lemmas},
              {"other_failures", other},
              {"verdict", verdict(report.passed())}};
}

void write_csv(std::ostream& out, const LemmaReport& report) {
  out << "lemma,checked,passed,vacuous,failed,verdict\n";
  for (const auto& t : report.lemmas) {
    out << t.name << ',' << t.checked << ',' << t.passed << ',' << t.vacuous << ','
        << t.failed << ',' << verdict(t.failed == 0) << '\n';
  }
}

void write_text(std::ostream& out, const LemmaReport& report) {
  out << "k=" << report.k_min << ".." << report.k_max << " instances=" << report.instances
      << " restarts=" << report.restarts << '\n';
  out << std::left << std::setw(22) << "statement" << std::setw(10) << "checked"
      << std::setw(10) << "passed" << std::setw(10) << "vacuous" << std::setw(9) << "vacuity"
      << std::setw(8) << "failed" << "verdict\n";
  for (const auto& t : report.lemmas) {
    std::ostringstream pct;
    pct << std::fixed << std::setprecision(1) << 100.0 * t.vacuity() << '%';
    out << std::setw(22) << t.name << std::setw(10) << t.checked << std::setw(10) << t.passed
        << std::setw(10) << t.vacuous << std::setw(9) << pct.str() << std::setw(8) << t.failed
        << verdict(t.failed == 0) << '\n';
  }
  out << std::right;
  out << "closed-form mismatches=" << report.closed_form_mismatches
      << " protocol failures=" << report.protocol_failures
      << " shift failures=" << report.shift_failures << '\n';
  for (const auto& t : report.lemmas) {
    for (const auto& cx : t.counterexamples) {
      out << "counterexample " << t.name << " k=" << cx.instance.k << " s=" << cx.instance.s
          << " r'=" << cx.instance.r_lo << " r''=" << cx.instance.r_hi << ": " << cx.detail
          << '\n';
    }
  }
  for (const auto& cx : report.other_failures) {
    out << "failure " << cx.check << " k=" << cx.instance.k << " s=" << cx.instance.s
        << " r'=" << cx.instance.r_lo << " r''=" << cx.instance.r_hi << ": " << cx.detail << '\n';
  }
  out << "verdict: " << verdict(report.passed()) << '\n';
}

Json worst_to_json(const std::vector<KSummary>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back(Json{{"k", row.k},
                       {"runs", row.runs},
                       {"max_extra", row.max_extra},
                       {"bound_extra", row.bound_extra()},
                       {"previous_bound", row.previous_bound()},
                       {"worst_extra", witness_json(row.worst_extra)},
                       {"max_left", row.max_left},
                       {"worst_left", witness_json(row.worst_left)},
                       {"max_right", row.max_right},
                       {"worst_right", witness_json(row.worst_right)}});
  }
  return out;
}

void write_worst_csv(std::ostream& out, const std::vector<KSummary>& rows) {
  out << "k,runs,max_extra,s,r_lo,r_hi,left,right,bound_extra,previous_bound\n";
  for (const auto& row : rows) {
    out << row.k << ',' << row.runs << ',' << row.max_extra << ',';
    if (row.worst_extra) {
      const auto& w = *row.worst_extra;
      out << w.instance.s << ',' << w.instance.r_lo << ',' << w.instance.r_hi << ',' << w.left
          << ',' << w.right;
    } else {
      out << ",,,,";
    }
    out << ',' << row.bound_extra() << ',' << row.previous_bound() << '\n';
  }
}

void write_worst_text(std::ostream& out, const std::vector<KSummary>& rows) {
  for (const auto& row : rows) {
    out << "k=" << row.k << " runs=" << row.runs << " max_extra=" << row.max_extra << " (bound "
        << row.bound_extra() << ", previous " << row.previous_bound()
        << ") witness: " << witness_text(row.worst_extra) << '\n';
    out << "     max_left=" << row.max_left << " witness: " << witness_text(row.worst_left) << '\n';
    out << "     max_right=" << row.max_right << " witness: " << witness_text(row.worst_right)
        << '\n';
  }
}

Json to_json(const Decomposition& dec) {
  Json segs = Json::array();
  for (const auto& seg : dec.segments) {
    Json sub = Json::array();
    for (int j = 0; j <= seg.level; ++j) {
      const auto y = sublevel(seg, j);
      sub.push_back(Json{{"j", j}, {"slots", {y.lo, y.hi}}, {"indices", x_image(seg, j)}});
    }
    segs.push_back(Json{{"i", seg.index},
                        {"t", seg.start},
                        {"l", seg.level},
                        {"slots", {seg.slots.lo, seg.slots.hi}},
                        {"beta", seg.beta.str()},
                        {"alpha", seg.alpha ? Json(seg.alpha->str()) : Json(nullptr)},
                        {"sublevels", sub}});
  }
  return Json{{"k", dec.k}, {"s", dec.start}, {"last", dec.last()}, {"segments", segs}};
}

void write_text(std::ostream& out, const Decomposition& dec) {
  out << "k=" << dec.k << " s=" << dec.start << " last=" << dec.last() << '\n';
  for (const auto& seg : dec.segments) {
    out << "segment " << seg.index << ": t=" << seg.start << " l=" << seg.level << " Y=["
        << seg.slots.lo << ", " << seg.slots.hi << "] beta=" << seg.beta.str();
    if (seg.alpha) out << " alpha=" << seg.alpha->str();
    out << '\n';
    for (int j = 0; j <= seg.level; ++j) {
      const auto y = sublevel(seg, j);
      out << "  j=" << j << " Y=[" << y.lo << ", " << y.hi << "] X={";
      const auto xs = x_image(seg, j);
      for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
      out << "}\n";
    }
  }
}

Json to_json(const ReceiverTrace<std::int64_t>& trace, TargetBounds targets) {
  Json events = Json::array();
  for (const auto& ev : trace.events) {
    events.push_back(Json{{"slot", ev.slot},
                          {"index", ev.index},
                          {"key", ev.key},
                          {"kind", std::string(to_string(ev.kind))}});
  }
  const auto e = energies(trace);
  return Json{{"k", trace.k},
              {"n", trace.n},
              {"s", trace.start},
              {"r_lo", targets.lo},
              {"r_hi", targets.hi},
              {"events", events},
              {"lb_history", trace.lb_history},
              {"ub_history", trace.ub_history},
              {"first_left", trace.first_left ? Json(*trace.first_left) : Json(nullptr)},
              {"first_right", trace.first_right ? Json(*trace.first_right) : Json(nullptr)},
              {"empty_detected", trace.empty_slot ? Json(*trace.empty_slot) : Json(nullptr)},
              {"energy", Json{{"left", e.left}, {"right", e.right}, {"extra", e.extra}, {"total", e.total}}}};
}

void write_text(std::ostream& out, const BroadcastCycle<std::int64_t>& cycle,
                const ReceiverTrace<std::int64_t>& trace, TargetBounds targets) {
  std::map<std::int64_t, EventKind> action;
  for (const auto& ev : trace.events) {
    if (ev.kind != EventKind::kEmptyDetected) action[ev.slot] = ev.kind;
  }
  out << std::left << std::setw(8) << "slot" << std::setw(8) << "index" << std::setw(7)
      << "radio" << std::setw(12) << "key" << std::setw(16) << "action" << std::setw(6) << "lb"
      << "ub\n";
  for (std::int64_t t = trace.start; t < trace.end(); ++t) {
    const auto msg = message_at(cycle, t);
    const auto it = action.find(t);
    const bool on = it != action.end();
    std::string what = on ? std::string(to_string(it->second)) : "-";
    if (trace.empty_slot && *trace.empty_slot == t) what += "+empty";
    out << std::setw(8) << t << std::setw(8) << msg.index << std::setw(7) << (on ? "on" : "off")
        << std::setw(12) << msg.key << std::setw(16) << what << std::setw(6)
        << trace.lb_before(t + 1) << trace.ub_before(t + 1) << '\n';
  }
  out << std::right;
  const auto e = energies(trace);
  out << "targets r'=" << targets.lo << " r''=" << targets.hi << '\n';
  if (trace.empty_slot) out << "empty-detected at slot " << *trace.empty_slot << '\n';
  out << "left=" << e.left << " right=" << e.right << " extra=" << e.extra
      << " total=" << e.total << '\n';
}

}  // namespace rbo
