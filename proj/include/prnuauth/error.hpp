// Copyright 2026 The prnuauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
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

namespace prnuauth {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedHeader,
  kUnsupportedDepth,
  kTruncated,
  kDimensionMismatch,
  kEmptyInput,
  kImageTooSmall,
  kDegenerate,
  kAlreadyPostprocessed,
  kBadMagic,
  kSizeMismatch,
  kUnknownCustomer,
  kDuplicateEnrollment,
  kInsufficientImages,
  kDegenerateFingerprint,
  kIo,
};

// Stable identifiers; the authentication facade puts these on the wire.
constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kMalformedHeader: return "MALFORMED_HEADER";
    case ErrorCode::kUnsupportedDepth: return "UNSUPPORTED_DEPTH";
    case ErrorCode::kTruncated: return "TRUNCATED";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kImageTooSmall: return "IMAGE_TOO_SMALL";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kAlreadyPostprocessed: return "ALREADY_POSTPROCESSED";
    case ErrorCode::kBadMagic: return "BAD_MAGIC";
    case ErrorCode::kSizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::kUnknownCustomer: return "UNKNOWN_CUSTOMER";
    case ErrorCode::kDuplicateEnrollment: return "DUPLICATE_ENROLLMENT";
    case ErrorCode::kInsufficientImages: return "INSUFFICIENT_IMAGES";
    case ErrorCode::kDegenerateFingerprint: return "DEGENERATE_FINGERPRINT";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prnuauth
