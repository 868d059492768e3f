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

// JSON, CSV and text renderings of traces, decompositions and verification
// reports. Output is a pure function of the input, so identical runs render
// byte-identical files.

#include <ostream>
#include <vector>

#include "json.hpp"
#include "rbo/analysis.hpp"
#include "rbo/protocol.hpp"
#include "rbo/verifier.hpp"

namespace rbo {

using Json = nlohmann::ordered_json;

// Per-k CSV schema:
// k,runs,max_left,max_right,max_extra,bound_left,bound_right,bound_extra,verdict
inline constexpr const char* kSweepCsvHeader =
    "k,runs,max_left,max_right,max_extra,bound_left,bound_right,bound_extra,verdict";

Json to_json(const SweepReport& report);
void write_csv(std::ostream& out, const SweepReport& report);
void write_text(std::ostream& out, const SweepReport& report);

Json to_json(const LemmaReport& report);
void write_csv(std::ostream& out, const LemmaReport& report);
void write_text(std::ostream& out, const LemmaReport& report);

Json worst_to_json(const std::vector<KSummary>& rows);
void write_worst_csv(std::ostream& out, const std::vector<KSummary>& rows);
void write_worst_text(std::ostream& out, const std::vector<KSummary>& rows);

Json to_json(const Decomposition& dec);
void write_text(std::ostream& out, const Decomposition& dec);

Json to_json(const ReceiverTrace<std::int64_t>& trace, TargetBounds targets);
// Per-slot table (slot, index, radio, key, action, lb, ub) plus an energy
// summary. Radio-off slots are listed explicitly.
void write_text(std::ostream& out, const BroadcastCycle<std::int64_t>& cycle,
                const ReceiverTrace<std::int64_t>& trace, TargetBounds targets);

}  // namespace rbo
