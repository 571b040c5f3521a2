/* Copyright 2026 The Landcover Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LANDCOVER_ERROR_H_
#define LANDCOVER_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace landcover {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidClass,
  kFormat,
  kPalette,
  kSize,
  kNormalization,
  kShape,
  kRange,
  kMissingFile,
  kIo,
  kEmptyDataset,
  kRule,
  kParse,
  kUnsupportedGeometry,
  kNotFound,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI, the HTTP service) can map it onto exit codes and statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace landcover

#endif  // LANDCOVER_ERROR_H_
