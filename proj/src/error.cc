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

#include "stress/error.h"

namespace stress {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kCsvHeaderMismatch: return "csv_header_mismatch";
    case ErrorCode::kCsvBadNumber: return "csv_bad_number";
    case ErrorCode::kCsvArity: return "csv_arity";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kDatasetTooSmall: return "dataset_too_small";
    case ErrorCode::kOutOfSpace: return "out_of_space";
    case ErrorCode::kTraining: return "training";
    case ErrorCode::kMetric: return "metric";
    case ErrorCode::kExternalSpawn: return "external_spawn";
    case ErrorCode::kExternalExit: return "external_exit";
    case ErrorCode::kExternalTimeout: return "external_timeout";
    case ErrorCode::kExternalOutput: return "external_output";
    case ErrorCode::kExternalMissingMetric: return "external_missing_metric";
    case ErrorCode::kExternalIllTypedMetric: return "external_ill_typed_metric";
    case ErrorCode::kSearch: return "search";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace stress
