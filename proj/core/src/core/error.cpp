// Copyright 2026 The photosplat Authors
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

#include "photosplat/core/error.hpp"

namespace photosplat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kOutOfBounds: return "out of bounds";
    case ErrorCode::kBehindCamera: return "behind camera";
    case ErrorCode::kInvalidDepth: return "invalid depth";
    case ErrorCode::kNotVisible: return "not visible";
    case ErrorCode::kInsufficientTexture: return "insufficient texture";
    case ErrorCode::kTrackingLost: return "tracking lost";
    case ErrorCode::kInvalidState: return "invalid state";
    case ErrorCode::kEmptyScene: return "empty scene";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

TrackingLostError::TrackingLostError(int frame_index, const std::string& message)
    : Error(ErrorCode::kTrackingLost,
            "frame " + std::to_string(frame_index) + ": " + message),
      frame_index_(frame_index) {}

void throw_error(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace photosplat
