// Copyright 2026 The Chalset Authors.
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

#ifndef CHALSET_ERROR_HPP_
#define CHALSET_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace chalset {

enum class ErrorCode {
  kMalformed,
  kMissingField,
  kInvalidValue,
  kDuplicateId,
  kInvalidId,
  kBadSpan,
  kMissingLocus,
  kEmptySet,
  kInconsistentCategory,
  kUnknownItem,
  kDuplicateOutput,
  kIncompleteMatrix,
  kIncompletePanel,
  kConflictingRevision,
  kUnknownTriple,
  kDuplicateTriple,
  kDuplicateAnnotator,
  kNoSystems,
  kUnknownSystem,
  kUnknownFormat,
  kNothingToRender,
  kInvalidVerdict,
  kUnknownSlot,
  kNotFound,
  kUnauthorized,
  kForbidden,
  kConflict,
  kStorage,
};

// Stable snake_case name, used in HTTP error bodies and CLI output.
std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library. `detail` carries the locating context
// (item id, field path, offending pair) separately from the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {})
      : std::runtime_error(std::move(message)),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace chalset

#endif  // CHALSET_ERROR_HPP_
