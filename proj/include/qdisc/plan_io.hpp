// Copyright 2026 The qdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDISC_PLAN_IO_HPP
#define QDISC_PLAN_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qdisc/channel_io.hpp"
#include "qdisc/protocol.hpp"

namespace qdisc {

// Plan file format:
//   {"format": "qdisc-plan", "version": 1, "scheme": "2d" | "general",
//    "claimed_queries": N, "channel": <channel object>,
//    "final_measurement_vector": [[re, im], ...],
//    "rounds": [{"index": k, "input_if_E": [...], "input_if_I": [...],
//                "predicted_overlap_after": x,
//                "pre_transform": null | {"kraus": [...], "source_a": <matrix>,
//                                         "source_b": [...], "target_a": [...],
//                                         "target_b": [...]}}, ...]}
//
// Doubles are written in shortest round-trip form, so parse followed by
// serialize reproduces the input bytes.
nlohmann::json plan_to_json(const ProtocolPlan& plan);
std::string plan_to_string(const ProtocolPlan& plan);
void save_plan(const ProtocolPlan& plan, const std::filesystem::path& path);

// Throws ParseError on malformed or structurally inconsistent plans.
ProtocolPlan plan_from_json(const nlohmann::json& doc);
ProtocolPlan parse_plan(std::string_view text);
ProtocolPlan load_plan(const std::filesystem::path& path);

// True if the text looks like a plan document rather than a channel.
bool is_plan_document(const nlohmann::json& doc);

}  // namespace qdisc

#endif  // QDISC_PLAN_IO_HPP
