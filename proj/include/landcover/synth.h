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

#ifndef LANDCOVER_SYNTH_H_
#define LANDCOVER_SYNTH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/classes.h"
#include "landcover/raster.h"

namespace landcover::synth {

// Per-class color distribution: mean plus isotropic Gaussian jitter.
struct ColorModel {
  Rgb mean;
  double jitter = 0.0;
};

// Default synthetic color for each class, chosen so that a per-pixel linear
// classifier separates clean scenes.
ColorModel DefaultColorModel(ClassId id);

enum class ShapeKind { kRectangle, kDisc, kStrip };

struct Primitive {
  ShapeKind kind = ShapeKind::kRectangle;
  // Rectangle: top-left (col,row) and extent. Disc: center (col,row) and
  // radius in `width`. Strip: full-length band starting at `col` (vertical)
  // or `row` (horizontal) with thickness `width`.
  int col = 0;
  int row = 0;
  int width = 0;
  int height = 0;
  bool vertical = false;
  ClassId label = ClassId::Unlabeled();
  ColorModel color;

  static Primitive Rectangle(int col, int row, int width, int height, ClassId label,
                             ColorModel color);
  static Primitive Disc(int center_col, int center_row, int radius, ClassId label,
                        ColorModel color);
  static Primitive Strip(bool vertical, int start, int thickness, ClassId label,
                         ColorModel color);
};

// Photometric shift applied right of column floor(position * size):
// value' = gain * value + bias per channel, clamped to [0, 255].
struct Seam {
  double position = 0.5;
  std::array<double, 3> gain{1.0, 1.0, 1.0};
  std::array<double, 3> bias{0.0, 0.0, 0.0};
};

struct SceneSpec {
  int size = 64;
  ClassId background = ClassId(kRangeland);
  ColorModel background_color;
  std::vector<Primitive> layout;  // painted in order, later ones on top
  std::optional<Seam> seam;
  std::uint64_t seed = 0;
};

struct Scene {
  RgbImage rgb;
  LabelRaster truth;
};

// Throws kRange for primitives outside the scene and kInvalidArgument for
// non-positive sizes or gains.
Scene GenerateScene(const SceneSpec& spec);

enum class ChipTag { kClean, kShifted };
std::string_view TagName(ChipTag tag);
std::optional<ChipTag> ParseTag(std::string_view text);

// Random desk-scale layout: rangeland background with rectangles, discs and
// road strips. Shifted scenes get a darkening seam somewhere in the left half.
SceneSpec RandomSceneSpec(int size, std::uint64_t seed, bool shifted);

struct WorldConfig {
  int n_cells = 8;
  int chips_per_cell = 4;
  double shift_fraction = 0.5;
  std::uint64_t seed = 0;
  int chip_size = 64;
  double cell_size_deg = 1.0;
  double pixel_size_deg = 1e-4;
  LonLat origin{135.0, 35.0};
};

struct WorldChip {
  std::string chip_id;
  std::string cell_id;
  ChipTag tag = ChipTag::kClean;
  SceneSpec spec;
  GeoTransform geo{0.0, 0.0, 1.0, -1.0};
};

struct World {
  WorldConfig config;
  std::vector<WorldChip> chips;
};

// floor(shift_fraction * total chips) chips, chosen by a seeded shuffle,
// carry seams; every chip's scene seed is derived from (seed, chip_id).
World GenerateWorld(const WorldConfig& config);

struct WorldManifestEntry {
  std::string chip_id;
  std::string cell_id;
  std::string rgb_path;    // relative to the world root
  std::string truth_path;  // relative to the world root
  ChipTag tag = ChipTag::kClean;
  GeoTransform geo{0.0, 0.0, 1.0, -1.0};
};

inline constexpr char kWorldManifestName[] = "world.json";

// Writes rgb/<id>.png, truth/<id>.png and world.json under root.
std::vector<WorldManifestEntry> WriteWorld(const World& world,
                                           const std::filesystem::path& root);
std::string WorldManifestToJson(const std::vector<WorldManifestEntry>& entries);
std::vector<WorldManifestEntry> ReadWorldManifest(const std::filesystem::path& path);

}  // namespace landcover::synth

#endif  // LANDCOVER_SYNTH_H_
