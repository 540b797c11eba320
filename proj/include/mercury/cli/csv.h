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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mercury {

struct CsvRecord {
  size_t line = 0;  // 1-based line where the record starts
  // nullopt for an unquoted empty field; "" for a quoted empty one.
  std::vector<std::optional<std::string>> fields;
};

// RFC-4180: comma separated, CRLF or LF line ends, fields optionally wrapped
// in double quotes with "" as an escaped quote. Quoted fields may span lines.
// Throws kParseError with line and column.
std::vector<CsvRecord> ParseCsv(std::string_view text);

// Quotes a field when it is empty or contains a comma, quote, CR or LF, so an
// empty string stays distinct from NULL.
std::string CsvEscape(std::string_view field);

}  // namespace mercury
