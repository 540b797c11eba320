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

#include "mercury/common/error.h"

namespace mercury {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kInvalidSchema: return "InvalidSchema";
    case ErrorCode::kUnknownBaseTable: return "UnknownBaseTable";
    case ErrorCode::kUnknownMView: return "UnknownMView";
    case ErrorCode::kMissingMlog: return "MissingMlog";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kDependentViews: return "DependentViews";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kKeyNotFound: return "KeyNotFound";
    case ErrorCode::kEmptyMemtable: return "EmptyMemtable";
    case ErrorCode::kNothingToCompact: return "NothingToCompact";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kNdvTooHigh: return "NdvTooHigh";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kIllegalFormat: return "IllegalFormat";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kCodeOutOfRange: return "CodeOutOfRange";
    case ErrorCode::kNonFixedKey: return "NonFixedKey";
    case ErrorCode::kUnsupportedAgg: return "UnsupportedAgg";
    case ErrorCode::kFormatUnavailable: return "FormatUnavailable";
    case ErrorCode::kMlogGap: return "MlogGap";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kCorruption: return "Corruption";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kLocked: return "Locked";
  }
  return "Unknown";
}

}  // namespace mercury
