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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace photosplat {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfBounds,
  kBehindCamera,
  kInvalidDepth,
  kNotVisible,
  kInsufficientTexture,
  kTrackingLost,
  kInvalidState,
  kEmptyScene,
  kNonFinite,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the odometry pipeline; carries the index of the frame that failed.
class TrackingLostError : public Error {
 public:
  TrackingLostError(int frame_index, const std::string& message);

  int frame_index() const noexcept { return frame_index_; }

 private:
  int frame_index_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message);

}  // namespace photosplat
