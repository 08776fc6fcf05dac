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

#include "esum/error.hpp"

namespace esum {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyDescription: return "EmptyDescription";
    case ErrorCode::kInvalidFold: return "InvalidFold";
    case ErrorCode::kGoldNotSubset: return "GoldNotSubset";
    case ErrorCode::kGoldTooLarge: return "GoldTooLarge";
    case ErrorCode::kNoGoldForK: return "NoGoldForK";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kEmptySummary: return "EmptySummary";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace esum
