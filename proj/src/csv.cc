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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stress/dataset.h"
#include "stress/error.h"

namespace stress {
namespace {

// RFC 4180 record reader over an in-memory buffer.
class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {}

  // Returns false at end of input. `row` is the 1-based record number.
  bool Next(std::vector<std::string>& fields, size_t& row) {
    if (pos_ >= text_.size()) return false;
    fields.clear();
    row = ++record_;
    std::string field;
    bool quoted = false;
    while (true) {
      if (pos_ >= text_.size()) {
        if (quoted) throw CsvError(ErrorCode::kCsvArity, "unterminated quoted field", row, fields.size() + 1);
        fields.push_back(std::move(field));
        return true;
      }
      const char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
        continue;
      }
      if (c == '"' && field.empty()) {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        fields.push_back(std::move(field));
        return true;
      } else {
        field.push_back(c);
      }
    }
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  size_t record_ = 0;
};

bool ParseFinite(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  auto result = std::from_chars(begin, end, out, std::chars_format::general);
  return result.ec == std::errc() && result.ptr == end && std::isfinite(out);
}

bool NeedsQuoting(const std::string& cell) {
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

std::string Quote(const std::string& cell) {
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset ParseCsv(std::string_view text, const Schema& schema, const CsvOptions& options) {
  schema.Validate();
  CsvReader reader(text);
  std::vector<std::string> fields;
  size_t row = 0;
  if (!reader.Next(fields, row)) {
    throw CsvError(ErrorCode::kCsvHeaderMismatch, "missing header", 1, 1);
  }
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
  if (fields.size() != schema.size()) {
    throw CsvError(ErrorCode::kCsvHeaderMismatch,
                   "header has " + std::to_string(fields.size()) + " columns, schema has " +
                       std::to_string(schema.size()),
                   1, std::min(fields.size(), schema.size()) + 1);
  }
  for (size_t c = 0; c < fields.size(); ++c) {
    if (fields[c] != schema.attributes[c].name) {
      throw CsvError(ErrorCode::kCsvHeaderMismatch,
                     "header '" + fields[c] + "' does not match schema attribute '" +
                         schema.attributes[c].name + "'",
                     1, c + 1);
    }
  }

  std::vector<Column> columns(schema.size());
  std::vector<std::shared_ptr<Vocabulary>> vocabularies(schema.size());
  for (size_t c = 0; c < schema.size(); ++c) {
    columns[c].kind = schema.attributes[c].kind;
    if (columns[c].kind == AttributeKind::kCategorical) {
      vocabularies[c] = std::make_shared<Vocabulary>();
    }
  }

  while (reader.Next(fields, row)) {
    // A lone trailing newline yields one empty field; skip it.
    if (fields.size() == 1 && fields[0].empty() && schema.size() > 1) continue;
    if (fields.size() != schema.size()) {
      throw CsvError(ErrorCode::kCsvArity,
                     "expected " + std::to_string(schema.size()) + " cells, found " +
                         std::to_string(fields.size()),
                     row, std::min(fields.size(), schema.size()) + 1);
    }
    for (size_t c = 0; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      const bool missing = cell.empty() || cell == options.missing_token;
      if (columns[c].kind == AttributeKind::kNumeric) {
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!missing && !ParseFinite(cell, value)) {
          throw CsvError(ErrorCode::kCsvBadNumber, "unparseable numeric cell '" + cell + "'", row,
                         c + 1);
        }
        columns[c].numbers.push_back(value);
      } else {
        columns[c].codes.push_back(missing ? kMissingCode : vocabularies[c]->Intern(cell));
      }
    }
  }
  for (size_t c = 0; c < schema.size(); ++c) {
    if (vocabularies[c]) columns[c].vocabulary = std::move(vocabularies[c]);
  }
  return Dataset(schema, std::move(columns));
}

Dataset LoadCsv(const std::filesystem::path& path, const Schema& schema, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StressError(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), schema, options);
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  const Schema& schema = dataset.schema();
  for (size_t c = 0; c < schema.size(); ++c) {
    if (c > 0) out.push_back(',');
    const std::string& name = schema.attributes[c].name;
    out += NeedsQuoting(name) ? Quote(name) : name;
  }
  out.push_back('\n');
  for (size_t r = 0; r < dataset.rows(); ++r) {
    for (size_t c = 0; c < dataset.cols(); ++c) {
      if (c > 0) out.push_back(',');
      const std::string cell = dataset.Render(r, c);
      out += NeedsQuoting(cell) ? Quote(cell) : cell;
    }
    out.push_back('\n');
  }
  return out;
}

void WriteCsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StressError(ErrorCode::kIo, "cannot write " + path.string());
  out << FormatCsv(dataset);
  if (!out) throw StressError(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace stress
