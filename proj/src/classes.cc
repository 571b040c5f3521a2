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

#include "landcover/classes.h"

#include <cctype>
#include <charconv>
#include <string>

#include "landcover/error.h"

namespace landcover {

namespace {

constexpr std::array<std::string_view, kNumClasses + 1> kClassNames = {
    "unlabeled",  "bareland", "rangeland",        "developed space", "road",
    "tree",       "water",    "agriculture land", "building",
};

constexpr std::array<Rgb, kNumClasses + 1> kPalette = {{
    {0, 0, 0},
    {128, 0, 0},
    {0, 255, 36},
    {148, 148, 148},
    {255, 255, 255},
    {34, 97, 38},
    {0, 69, 255},
    {75, 181, 73},
    {222, 31, 7},
}};

std::string NormalizeName(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '_' || c == '-') c = ' ';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  const auto first = out.find_first_not_of(' ');
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(' ');
  return out.substr(first, last - first + 1);
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInvalidClass: return "invalid_class";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kPalette: return "palette";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kMissingFile: return "missing_file";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEmptyDataset: return "empty_dataset";
    case ErrorCode::kRule: return "rule";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnsupportedGeometry: return "unsupported_geometry";
    case ErrorCode::kNotFound: return "not_found";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ClassId::ClassId(int index) {
  if (!IsValidClassIndex(index)) {
    throw Error(ErrorCode::kInvalidClass,
                "class index " + std::to_string(index) + " outside 0.." +
                    std::to_string(kNumClasses));
  }
  index_ = static_cast<std::uint8_t>(index);
}

bool IsValidClassIndex(int index) { return index >= 0 && index <= kNumClasses; }

std::string_view ClassName(ClassId id) { return kClassNames[id.index()]; }

const std::array<Rgb, kNumClasses + 1>& Palette() { return kPalette; }

Rgb PaletteColor(ClassId id) { return kPalette[id.index()]; }

std::optional<ClassId> ClassFromColor(Rgb color) {
  for (int i = 0; i <= kNumClasses; ++i) {
    if (kPalette[i] == color) return ClassId(i);
  }
  return std::nullopt;
}

std::optional<ClassId> ParseClass(std::string_view text) {
  const std::string name = NormalizeName(text);
  if (name.empty()) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(name.data(), name.data() + name.size(), value);
  if (ec == std::errc() && ptr == name.data() + name.size()) {
    if (!IsValidClassIndex(value)) return std::nullopt;
    return ClassId(value);
  }
  for (int i = 0; i <= kNumClasses; ++i) {
    if (kClassNames[i] == name) return ClassId(i);
  }
  return std::nullopt;
}

}  // namespace landcover
