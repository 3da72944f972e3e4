// Copyright 2026 The ocseg Authors.
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

#include "ocseg/error.hpp"

namespace ocseg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kMalformedManifest: return "malformed_manifest";
    case ErrorCode::kMissingFile: return "missing_file";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kUnitsMismatch: return "units_mismatch";
    case ErrorCode::kSamplingFailed: return "sampling_failed";
  }
  return "unknown";
}

int error_exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 2;
    case ErrorCode::kShapeMismatch: return 3;
    case ErrorCode::kMalformedManifest: return 4;
    case ErrorCode::kMissingFile: return 5;
    case ErrorCode::kIo: return 6;
    case ErrorCode::kUnitsMismatch: return 7;
    case ErrorCode::kSamplingFailed: return 8;
  }
  return 1;
}

}  // namespace ocseg
