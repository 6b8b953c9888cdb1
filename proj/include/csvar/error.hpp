// Copyright 2026 The csvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef CSVAR_ERROR_HPP_
#define CSVAR_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace csvar {

enum class ErrorCode {
  kInvalidArgument,
  kNonDivisibleDimensions,
  kRegionOutOfBounds,
  kInvalidOverride,
  kBlockSizeMismatch,
  kBadMagic,
  kTruncatedFile,
  kCountMismatch,
  kLabelOutOfRange,
  kMalformedHeader,
  kUnsupportedMaxval,
  kIoError,
  kChecksumMismatch,
  kEmptyClient,
  kShapeMismatch,
  kEmptyClientList,
  kMissingVariant,
  kEmptyCohort,
  kNotColorImage,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (CLI, Python bindings) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace csvar

#endif  // CSVAR_ERROR_HPP_
