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

#ifndef STRESS_DCP_JSON_H_
#define STRESS_DCP_JSON_H_

#include <filesystem>

#include "json.hpp"
#include "stress/corruption.h"

namespace stress {

// Wire format of a concrete corruption process:
//   {"error": {"type": "missing_value", "target": "wage"},
//    "pattern": [{"attribute": "age", "lower": 30, "upper": 40},
//                {"attribute": "income", "equals": ">50K"}],
//    "p": 0.5,
//    "proportions": [...]}            // multi-class label errors only
// Doubles are written with round-trip precision so replay is bit-exact.
nlohmann::ordered_json ErrorTypeToJson(const ErrorType& error);
ErrorType ErrorTypeFromJson(const nlohmann::json& json);

nlohmann::ordered_json DcpToJson(const Dcp& dcp);
Dcp DcpFromJson(const nlohmann::json& json);

Dcp LoadDcp(const std::filesystem::path& path);
void SaveDcp(const Dcp& dcp, const std::filesystem::path& path);

nlohmann::ordered_json TemplateToJson(const CorruptionTemplate& tmpl);

}  // namespace stress

#endif  // STRESS_DCP_JSON_H_
