/*
 * Copyright 2026 The Stress Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "stress/dcp_json.h"

#include <fstream>

#include "stress/error.h"

namespace stress {

nlohmann::ordered_json ErrorTypeToJson(const ErrorType& error) {
  nlohmann::ordered_json out;
  switch (error.kind) {
    case ErrorKind::kMissingValue:
      out["type"] = "missing_value";
      out["target"] = error.target.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(error.target);
      break;
    case ErrorKind::kLabelError:
      out["type"] = "label_error";
      out["classes"] = error.classes;
      break;
    case ErrorKind::kSelectionBias:
      out["type"] = "selection_bias";
      break;
  }
  return out;
}

ErrorType ErrorTypeFromJson(const nlohmann::json& json) {
  const auto type = json.at("type").get<std::string>();
  if (type == "missing_value" || type == "mv") {
    const auto& target = json.value("target", nlohmann::json());
    return ErrorType::MissingValue(target.is_null() ? std::string() : target.get<std::string>());
  }
  if (type == "label_error" || type == "le") {
    return ErrorType::LabelError(json.value("classes", std::vector<std::string>{}));
  }
  if (type == "selection_bias" || type == "sb") return ErrorType::SelectionBias();
  throw StressError(ErrorCode::kConfig, "unknown error type '" + type + "'");
}

nlohmann::ordered_json DcpToJson(const Dcp& dcp) {
  nlohmann::ordered_json out;
  out["error"] = ErrorTypeToJson(dcp.error);
  out["pattern"] = nlohmann::ordered_json::array();
  for (const auto& condition : dcp.pattern.conditions) {
    nlohmann::ordered_json c;
    c["attribute"] = condition.attribute;
    if (condition.equals) c["equals"] = *condition.equals;
    if (condition.lower) c["lower"] = *condition.lower;
    if (condition.upper) c["upper"] = *condition.upper;
    out["pattern"].push_back(std::move(c));
  }
  out["p"] = dcp.p;
  if (!dcp.proportions.empty()) out["proportions"] = dcp.proportions;
  return out;
}

Dcp DcpFromJson(const nlohmann::json& json) {
  try {
    Dcp dcp;
    dcp.error = ErrorTypeFromJson(json.at("error"));
    for (const auto& entry : json.at("pattern")) {
      RangeCondition condition;
      condition.attribute = entry.at("attribute").get<std::string>();
      if (entry.contains("equals")) condition.equals = entry["equals"].get<std::string>();
      if (entry.contains("lower")) condition.lower = entry["lower"].get<double>();
      if (entry.contains("upper")) condition.upper = entry["upper"].get<double>();
      dcp.pattern.conditions.push_back(std::move(condition));
    }
    dcp.p = json.at("p").get<double>();
    if (json.contains("proportions")) dcp.proportions = json["proportions"].get<std::vector<double>>();
    return dcp;
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kConfig, std::string("malformed corruption process: ") + e.what());
  }
}

Dcp LoadDcp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StressError(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  return DcpFromJson(json);
}

void SaveDcp(const Dcp& dcp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw StressError(ErrorCode::kIo, "cannot write " + path.string());
  out << DcpToJson(dcp).dump(2) << '\n';
}

nlohmann::ordered_json TemplateToJson(const CorruptionTemplate& tmpl) {
  nlohmann::ordered_json out;
  out["key"] = tmpl.Key();
  out["error"] = ErrorTypeToJson(tmpl.error);
  out["pattern_attributes"] = tmpl.pattern_attributes;
  return out;
}

}  // namespace stress
