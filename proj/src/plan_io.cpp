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

#include "qdisc/plan_io.hpp"

#include <fstream>

#include "qdisc/channel_io.hpp"

namespace qdisc {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "qdisc-plan";
constexpr int kVersion = 1;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  return obj[key];
}

int int_field(const json& obj, const char* key, const std::string& where) {
  const json& j = field(obj, key, where);
  if (!j.is_number_integer()) throw ParseError(where + "." + key + ": expected integer");
  return j.get<int>();
}

PureState state_from_json(const json& j, int dim, const std::string& where) {
  const Vector v = vector_from_json(j, where);
  if (v.size() != dim) {
    throw ParseError(where + ": has " + std::to_string(v.size()) + " amplitudes, expected " +
                     std::to_string(dim));
  }
  try {
    return PureState(v);
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

json transform_to_json(const StatePairTransform& t) {
  json kraus = json::array();
  for (const auto& k : t.kraus) kraus.push_back(matrix_to_json(k));
  return json{
      {"kraus", std::move(kraus)},
      {"source_a", matrix_to_json(t.source_a.matrix())},
      {"source_b", vector_to_json(t.source_b.amplitudes())},
      {"target_a", vector_to_json(t.target_a.amplitudes())},
      {"target_b", vector_to_json(t.target_b.amplitudes())},
  };
}

StatePairTransform transform_from_json(const json& j, int dim, const std::string& where) {
  const json& kj = field(j, "kraus", where);
  if (!kj.is_array() || kj.empty()) throw ParseError(where + ".kraus: expected nonempty array");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < kj.size(); ++i) {
    kraus.push_back(matrix_from_json(kj[i], dim, where + ".kraus[" + std::to_string(i) + "]"));
  }
  const Matrix rho = matrix_from_json(field(j, "source_a", where), dim, where + ".source_a");
  std::optional<DensityOperator> source_a;
  try {
    source_a.emplace(rho, 1e-8);
  } catch (const Error& e) {
    throw ParseError(where + ".source_a: " + e.what());
  }
  return StatePairTransform{
      .kraus = std::move(kraus),
      .source_a = *source_a,
      .source_b = state_from_json(field(j, "source_b", where), dim, where + ".source_b"),
      .target_a = state_from_json(field(j, "target_a", where), dim, where + ".target_a"),
      .target_b = state_from_json(field(j, "target_b", where), dim, where + ".target_b"),
  };
}

}  // namespace

json plan_to_json(const ProtocolPlan& plan) {
  json rounds = json::array();
  for (const auto& r : plan.rounds) {
    rounds.push_back(json{
        {"index", r.index},
        {"input_if_E", vector_to_json(r.input_if_E.amplitudes())},
        {"input_if_I", vector_to_json(r.input_if_I.amplitudes())},
        {"predicted_overlap_after", r.predicted_overlap_after},
        {"pre_transform", r.pre_transform ? transform_to_json(*r.pre_transform) : json(nullptr)},
    });
  }
  return json{
      {"format", kFormat},
      {"version", kVersion},
      {"scheme", plan.scheme},
      {"claimed_queries", plan.claimed_queries},
      {"channel", channel_to_json(plan.channel)},
      {"final_measurement_vector", vector_to_json(plan.final_measurement_vector.amplitudes())},
      {"rounds", std::move(rounds)},
  };
}

std::string plan_to_string(const ProtocolPlan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

void save_plan(const ProtocolPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << plan_to_string(plan);
}

bool is_plan_document(const json& doc) {
  return doc.is_object() && doc.contains("format") && doc["format"] == kFormat;
}

ProtocolPlan plan_from_json(const json& doc) {
  const std::string where = "plan";
  if (!is_plan_document(doc)) throw ParseError(where + ": not a plan document (format field)");
  if (int_field(doc, "version", where) != kVersion) {
    throw ParseError(where + ".version: unsupported version");
  }
  const json& scheme = field(doc, "scheme", where);
  if (!scheme.is_string()) throw ParseError(where + ".scheme: expected string");
  KrausChannel channel = channel_from_json(field(doc, "channel", where), 1e-6, where + ".channel");
  const int dim = channel.dim();
  const int claimed = int_field(doc, "claimed_queries", where);
  const json& rj = field(doc, "rounds", where);
  if (!rj.is_array() || rj.empty()) throw ParseError(where + ".rounds: expected nonempty array");
  if (claimed != static_cast<int>(rj.size())) {
    throw ParseError(where + ".claimed_queries: " + std::to_string(claimed) + " but " +
                     std::to_string(rj.size()) + " rounds");
  }
  std::vector<Round> rounds;
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string rw = where + ".rounds[" + std::to_string(i) + "]";
    const json& r = rj[i];
    const int index = int_field(r, "index", rw);
    if (index != static_cast<int>(i) + 1) throw ParseError(rw + ".index: out of sequence");
    const json& ov = field(r, "predicted_overlap_after", rw);
    if (!ov.is_number()) throw ParseError(rw + ".predicted_overlap_after: expected number");
    const json& tj = field(r, "pre_transform", rw);
    std::optional<StatePairTransform> t;
    if (!tj.is_null()) t = transform_from_json(tj, dim, rw + ".pre_transform");
    if ((i == 0) != !t) {
      throw ParseError(rw + ".pre_transform: required in every round after the first only");
    }
    rounds.push_back(Round{
        .index = index,
        .pre_transform = std::move(t),
        .input_if_E = state_from_json(field(r, "input_if_E", rw), dim, rw + ".input_if_E"),
        .input_if_I = state_from_json(field(r, "input_if_I", rw), dim, rw + ".input_if_I"),
        .predicted_overlap_after = ov.get<double>(),
    });
  }
  return ProtocolPlan{
      .channel = std::move(channel),
      .scheme = scheme.get<std::string>(),
      .rounds = std::move(rounds),
      .final_measurement_vector = state_from_json(field(doc, "final_measurement_vector", where),
                                                  dim, where + ".final_measurement_vector"),
      .claimed_queries = claimed,
  };
}

ProtocolPlan parse_plan(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("plan: syntax error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  return plan_from_json(doc);
}

ProtocolPlan load_plan(const std::filesystem::path& path) {
  try {
    return parse_plan(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace qdisc
