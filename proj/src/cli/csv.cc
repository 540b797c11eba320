// Copyright 2026 The Mercury Mini Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mercury/cli/csv.h"

#include "mercury/common/error.h"

namespace mercury {

namespace {

[[noreturn]] void Fail(size_t line, size_t col, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

}  // namespace

std::vector<CsvRecord> ParseCsv(std::string_view text) {
  std::vector<CsvRecord> out;
  size_t i = 0, line = 1, line_start = 0;
  const size_t n = text.size();
  while (i < n) {
    CsvRecord rec;
    rec.line = line;
    bool end_of_record = false;
    while (!end_of_record) {
      size_t col = i - line_start + 1;
      if (i < n && text[i] == '"') {
        std::string field;
        ++i;
        for (;;) {
          if (i >= n) Fail(rec.line, col, "unterminated quoted field");
          char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') {
            ++line;
            line_start = i + 1;
          }
          field.push_back(c);
          ++i;
        }
        rec.fields.emplace_back(std::move(field));
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          Fail(line, i - line_start + 1, "unexpected character after closing quote");
        }
      } else {
        size_t start = i;
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') Fail(line, i - line_start + 1, "quote inside an unquoted field");
          ++i;
        }
        if (i == start) {
          rec.fields.emplace_back(std::nullopt);
        } else {
          rec.fields.emplace_back(std::string(text.substr(start, i - start)));
        }
      }
      if (i >= n) {
        end_of_record = true;
      } else if (text[i] == ',') {
        ++i;
      } else {
        if (text[i] == '\r') {
          ++i;
          if (i < n && text[i] != '\n') Fail(line, i - line_start + 1, "bare carriage return");
        }
        ++i;
        ++line;
        line_start = i;
        end_of_record = true;
      }
    }
    // A blank line is a record with one empty field; skip it.
    if (rec.fields.size() == 1 && !rec.fields[0]) continue;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string CsvEscape(std::string_view field) {
  if (!field.empty() && field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace mercury
