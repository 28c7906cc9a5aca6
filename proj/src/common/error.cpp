// Copyright 2026 The logorec Authors
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

#include "common/error.hpp"

namespace logorec {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kUsage: return "usage error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kData: return "data error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kVersion: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated file";
    case ErrorCode::kShape: return "shape mismatch";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

}  // namespace logorec
