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

#ifndef QDISC_CHANNEL_IO_HPP
#define QDISC_CHANNEL_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qdisc/core.hpp"

namespace qdisc {

// Malformed input text. The message carries the byte offset or the JSON path
// of the offending element.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Channel file format:
//   {"dim": d, "name": "optional", "kraus": [M_1, ...]}
// with M = array of d rows, row = array of d entries, entry = [re, im].
//
// Rejects ragged or non-square data with ParseError. If max_residual is set,
// a completeness residual above it raises ValidityError.
KrausChannel parse_channel(std::string_view text, std::optional<double> max_residual = 1e-6);
KrausChannel load_channel(const std::filesystem::path& path,
                          std::optional<double> max_residual = 1e-6);

// `where` prefixes error messages (JSON path of doc).
KrausChannel channel_from_json(const nlohmann::json& doc, std::optional<double> max_residual,
                               const std::string& where);
nlohmann::json channel_to_json(const KrausChannel& channel);
std::string channel_to_string(const KrausChannel& channel);
void save_channel(const KrausChannel& channel, const std::filesystem::path& path);

// Shared helpers for the [re, im] encoding, also used by the plan format.
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, int dim, const std::string& where);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace qdisc

#endif  // QDISC_CHANNEL_IO_HPP
