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

#ifndef LANDCOVER_CLASSES_H_
#define LANDCOVER_CLASSES_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace landcover {

// Number of land-cover classes. Index 0 is reserved for unlabeled pixels.
inline constexpr int kNumClasses = 8;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr auto operator<=>(const Rgb&, const Rgb&) = default;
};

class ClassId {
 public:
  // Throws Error(kInvalidClass) for indices outside 0..kNumClasses.
  explicit ClassId(int index);

  static constexpr ClassId Unlabeled() { return ClassId(); }

  std::uint8_t index() const { return index_; }
  bool is_unlabeled() const { return index_ == 0; }

  friend constexpr auto operator<=>(const ClassId&, const ClassId&) = default;

 private:
  constexpr ClassId() = default;
  std::uint8_t index_ = 0;
};

inline constexpr std::uint8_t kBareland = 1;
inline constexpr std::uint8_t kRangeland = 2;
inline constexpr std::uint8_t kDevelopedSpace = 3;
inline constexpr std::uint8_t kRoad = 4;
inline constexpr std::uint8_t kTree = 5;
inline constexpr std::uint8_t kWater = 6;
inline constexpr std::uint8_t kAgricultureLand = 7;
inline constexpr std::uint8_t kBuilding = 8;

bool IsValidClassIndex(int index);

std::string_view ClassName(ClassId id);

// Normative label palette, indexed by class id.
const std::array<Rgb, kNumClasses + 1>& Palette();
Rgb PaletteColor(ClassId id);

// Inverse palette lookup; nullopt for colors outside the palette.
std::optional<ClassId> ClassFromColor(Rgb color);

// Accepts either the numeric index or the class name ("agriculture land",
// case-insensitive, '_' and ' ' interchangeable).
std::optional<ClassId> ParseClass(std::string_view text);

}  // namespace landcover

#endif  // LANDCOVER_CLASSES_H_
