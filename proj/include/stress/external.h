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

#ifndef STRESS_EXTERNAL_H_
#define STRESS_EXTERNAL_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "stress/dataset.h"

namespace stress {

// A pipeline living in another process. The command is run as
//   command[0] command[1..] --train <csv> --test <csv> --schema <json>
// and must print exactly one JSON object on stdout. stderr is inherited.
struct ExternalPipeline {
  std::vector<std::string> command;
  double timeout_seconds = 600.0;
  std::string metric_key = "auc";

  static ExternalPipeline FromJson(const nlohmann::json& json);
  nlohmann::ordered_json ToJson() const;
};

// Writes both datasets and the schema into a fresh temporary directory,
// runs the command and returns the number at metric_key. Failures surface as
// StressError with kExternalSpawn, kExternalExit, kExternalTimeout,
// kExternalOutput, kExternalMissingMetric or kExternalIllTypedMetric.
double ExternalEvaluate(const ExternalPipeline& pipeline, const Dataset& train, const Dataset& test);

}  // namespace stress

#endif  // STRESS_EXTERNAL_H_
