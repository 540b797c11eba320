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

#include <stdexcept>
#include <string>
#include <string_view>

namespace mercury {

enum class ErrorCode {
  kInvalidArgument,
  kDuplicateName,
  kInvalidSchema,
  kUnknownBaseTable,
  kUnknownMView,
  kMissingMlog,
  kUnsupported,
  kDependentViews,
  kDuplicateKey,
  kKeyNotFound,
  kEmptyMemtable,
  kNothingToCompact,
  kOverflow,
  kNotApplicable,
  kNdvTooHigh,
  kTypeMismatch,
  kIllegalFormat,
  kLengthMismatch,
  kCodeOutOfRange,
  kNonFixedKey,
  kUnsupportedAgg,
  kFormatUnavailable,
  kMlogGap,
  kSchemaMismatch,
  kParseError,
  kCorruption,
  kIoError,
  kLocked,
};

std::string_view ErrorCodeName(ErrorCode code);

// All engine failures surface as this exception; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mercury
