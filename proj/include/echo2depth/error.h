// Copyright 2026 The echo2depth Authors
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

#ifndef ECHO2DEPTH_ERROR_H_
#define ECHO2DEPTH_ERROR_H_

#include <stdexcept>
#include <string>

namespace echo2depth {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kNotFound,
  kAlreadyExists,
  kIo,
  kCorrupt,
  kNumerical,
  kNoChirp,
};

// Stable lowercase identifier used in machine-readable CLI error lines.
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(code, message) when `condition` is false.
inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace echo2depth

#endif  // ECHO2DEPTH_ERROR_H_
