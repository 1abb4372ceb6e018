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

#include "qdisc/channel_io.hpp"

#include <fstream>
#include <sstream>

namespace qdisc {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected nonempty amplitude array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected array of rows");
  if (static_cast<int>(j.size()) != dim) {
    throw ParseError(where + ": has " + std::to_string(j.size()) + " rows, expected " +
                     std::to_string(dim) + " (matrices must be square)");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[r];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw ParseError(rw + ": expected array of entries");
    if (static_cast<int>(row.size()) != dim) {
      throw ParseError(rw + ": has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(dim) + " (ragged or non-square matrix)");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = complex_from_json(row[c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KrausChannel channel_from_json(const json& doc, std::optional<double> max_residual,
                               const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) {
    throw ParseError(where + ".dim: expected positive integer");
  }
  const int dim = doc["dim"].get<int>();
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError(where + ".name: expected string");
    name = doc["name"].get<std::string>();
  }
  if (!doc.contains("kraus") || !doc["kraus"].is_array() || doc["kraus"].empty()) {
    throw ParseError(where + ".kraus: expected nonempty array of matrices");
  }
  std::vector<Matrix> kraus;
  const auto& arr = doc["kraus"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    kraus.push_back(matrix_from_json(arr[i], dim, where + ".kraus[" + std::to_string(i) + "]"));
  }
  KrausChannel channel(std::move(kraus), std::move(name));
  if (max_residual && channel.validity().completeness_residual > *max_residual) {
    throw ValidityError(where + ": completeness residual " +
                        std::to_string(channel.validity().completeness_residual) +
                        " exceeds " + std::to_string(*max_residual));
  }
  return channel;
}

KrausChannel parse_channel(std::string_view text, std::optional<double> max_residual) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("channel: syntax error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  return channel_from_json(doc, max_residual, "channel");
}

KrausChannel load_channel(const std::filesystem::path& path, std::optional<double> max_residual) {
  try {
    return parse_channel(read_text_file(path), max_residual);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json channel_to_json(const KrausChannel& channel) {
  json doc;
  doc["dim"] = channel.dim();
  if (!channel.name().empty()) doc["name"] = channel.name();
  json kraus = json::array();
  for (const auto& k : channel.kraus()) kraus.push_back(matrix_to_json(k));
  doc["kraus"] = std::move(kraus);
  return doc;
}

std::string channel_to_string(const KrausChannel& channel) {
  return channel_to_json(channel).dump(2) + "\n";
}

void save_channel(const KrausChannel& channel, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << channel_to_string(channel);
}

}  // namespace qdisc
