// Copyright 2026 The esum Authors.
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

#ifndef ESUM_ERROR_HPP_
#define ESUM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace esum {

// Every failure raised by the core library carries one of these codes. The
// numeric values are shared with the C API (esum_status in esum.h).
enum class ErrorCode {
  kUsage = 1,
  kMissingFile = 2,
  kMalformedLine = 3,
  kEmptyDescription = 4,
  kInvalidFold = 5,
  kGoldNotSubset = 6,
  kGoldTooLarge = 7,
  kNoGoldForK = 8,
  kDimMismatch = 9,
  kParseError = 10,
  kShapeMismatch = 11,
  kVersionMismatch = 12,
  kCorruptCheckpoint = 13,
  kNonFiniteLoss = 14,
  kLengthMismatch = 15,
  kDegenerateVariance = 16,
  kEmptySummary = 17,
  kInvalidManifest = 18,
  kUnknownEntity = 19,
  kIo = 20,
};

const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Line-addressed parse failure (MalformedLine, DimMismatch, ParseError).
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line_no, const std::string &message)
      : Error(code, message), line_no_(line_no) {}

  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

}  // namespace esum

#endif  // ESUM_ERROR_HPP_
