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

#ifndef STRESS_ERROR_H_
#define STRESS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stress {

enum class ErrorCode {
  kInvalidArgument,
  kSchema,
  kCsvHeaderMismatch,
  kCsvBadNumber,
  kCsvArity,
  kIo,
  kDatasetTooSmall,
  kOutOfSpace,
  kTraining,
  kMetric,
  kExternalSpawn,
  kExternalExit,
  kExternalTimeout,
  kExternalOutput,
  kExternalMissingMetric,
  kExternalIllTypedMetric,
  kSearch,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// Base exception for every failure surfaced by the library. The code lets
// callers tell failure classes apart without parsing messages.
class StressError : public std::runtime_error {
 public:
  StressError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// CSV failures carry a 1-based row (header is row 1) and column.
class CsvError : public StressError {
 public:
  CsvError(ErrorCode code, const std::string& message, size_t row, size_t column)
      : StressError(code, message + " (row " + std::to_string(row) + ", column " +
                              std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  size_t row() const { return row_; }
  size_t column() const { return column_; }

 private:
  size_t row_;
  size_t column_;
};

}  // namespace stress

#endif  // STRESS_ERROR_H_
