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

#include "landcover/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/png_codec.h"
#include "landcover/random.h"
#include "landcover/select.h"

namespace landcover::synth {

namespace {

constexpr double kDefaultJitter = 10.0;

void CheckPrimitive(const Primitive& p, int size) {
  bool inside = true;
  switch (p.kind) {
    case ShapeKind::kRectangle:
      inside = p.col >= 0 && p.row >= 0 && p.width > 0 && p.height > 0 &&
               p.col + p.width <= size && p.row + p.height <= size;
      break;
    case ShapeKind::kDisc:
      inside = p.width > 0 && p.col - p.width >= 0 && p.row - p.width >= 0 &&
               p.col + p.width < size && p.row + p.width < size;
      break;
    case ShapeKind::kStrip: {
      const int start = p.vertical ? p.col : p.row;
      inside = start >= 0 && p.width > 0 && start + p.width <= size;
      break;
    }
  }
  if (!inside) throw Error(ErrorCode::kRange, "primitive lies outside the scene");
}

bool Covers(const Primitive& p, int col, int row) {
  switch (p.kind) {
    case ShapeKind::kRectangle:
      return col >= p.col && col < p.col + p.width && row >= p.row &&
             row < p.row + p.height;
    case ShapeKind::kDisc: {
      const long dx = col - p.col;
      const long dy = row - p.row;
      return dx * dx + dy * dy <= static_cast<long>(p.width) * p.width;
    }
    case ShapeKind::kStrip: {
      const int v = p.vertical ? col : row;
      const int start = p.vertical ? p.col : p.row;
      return v >= start && v < start + p.width;
    }
  }
  return false;
}

nlohmann::json GeoJson(const GeoTransform& geo) {
  return {geo.origin_lon(), geo.origin_lat(), geo.pixel_size_x(), geo.pixel_size_y()};
}

}  // namespace

ColorModel DefaultColorModel(ClassId id) {
  switch (id.index()) {
    case kBareland: return {{160, 120, 80}, kDefaultJitter};
    case kRangeland: return {{120, 160, 80}, kDefaultJitter};
    case kDevelopedSpace: return {{185, 185, 180}, kDefaultJitter};
    case kRoad: return {{105, 105, 110}, kDefaultJitter};
    case kTree: return {{30, 85, 40}, kDefaultJitter};
    case kWater: return {{35, 65, 130}, kDefaultJitter};
    case kAgricultureLand: return {{200, 185, 95}, kDefaultJitter};
    case kBuilding: return {{205, 75, 65}, kDefaultJitter};
    default: return {{0, 0, 0}, 0.0};
  }
}

Primitive Primitive::Rectangle(int col, int row, int width, int height,
                               ClassId label, ColorModel color) {
  return {ShapeKind::kRectangle, col, row, width, height, false, label, color};
}

Primitive Primitive::Disc(int center_col, int center_row, int radius, ClassId label,
                          ColorModel color) {
  return {ShapeKind::kDisc, center_col, center_row, radius, radius, false, label, color};
}

Primitive Primitive::Strip(bool vertical, int start, int thickness, ClassId label,
                           ColorModel color) {
  Primitive p{ShapeKind::kStrip, 0, 0, thickness, 0, vertical, label, color};
  (vertical ? p.col : p.row) = start;
  return p;
}

Scene GenerateScene(const SceneSpec& spec) {
  if (spec.size < 1) throw Error(ErrorCode::kInvalidArgument, "scene size must be >= 1");
  for (const auto& p : spec.layout) CheckPrimitive(p, spec.size);
  if (spec.seam) {
    const auto& s = *spec.seam;
    if (!(s.position >= 0.0 && s.position <= 1.0)) {
      throw Error(ErrorCode::kRange, "seam position must lie in [0, 1]");
    }
    for (double g : s.gain) {
      if (!(g > 0.0)) throw Error(ErrorCode::kInvalidArgument, "seam gains must be > 0");
    }
  }
  const int n = spec.size;
  // Index into layout of the primitive owning each pixel; -1 = background.
  std::vector<int> owner(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t i = 0; i < spec.layout.size(); ++i) {
    for (int row = 0; row < n; ++row) {
      for (int col = 0; col < n; ++col) {
        if (Covers(spec.layout[i], col, row)) {
          owner[static_cast<std::size_t>(row) * n + col] = static_cast<int>(i);
        }
      }
    }
  }
  const int seam_col = spec.seam
                           ? static_cast<int>(std::floor(spec.seam->position * n))
                           : n;
  Rng rng(spec.seed);
  Scene scene{RgbImage(n, n), LabelRaster(n, n)};
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int o = owner[static_cast<std::size_t>(row) * n + col];
      const ColorModel& color = o < 0 ? spec.background_color : spec.layout[o].color;
      const ClassId label = o < 0 ? spec.background : spec.layout[o].label;
      scene.truth.set(col, row, label);
      const std::array<double, 3> mean = {static_cast<double>(color.mean.r),
                                          static_cast<double>(color.mean.g),
                                          static_cast<double>(color.mean.b)};
      std::array<std::uint8_t, 3> out{};
      for (int ch = 0; ch < 3; ++ch) {
        double v = mean[ch];
        if (color.jitter > 0.0) v += color.jitter * rng.Normal();
        if (col >= seam_col) v = spec.seam->gain[ch] * v + spec.seam->bias[ch];
        out[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      scene.rgb.set(col, row, {out[0], out[1], out[2]});
    }
  }
  return scene;
}

std::string_view TagName(ChipTag tag) {
  return tag == ChipTag::kClean ? "clean" : "shifted";
}

std::optional<ChipTag> ParseTag(std::string_view text) {
  if (text == "clean") return ChipTag::kClean;
  if (text == "shifted") return ChipTag::kShifted;
  return std::nullopt;
}

SceneSpec RandomSceneSpec(int size, std::uint64_t seed, bool shifted) {
  if (size < 16) throw Error(ErrorCode::kInvalidArgument, "random scenes need size >= 16");
  Rng rng(seed);
  SceneSpec spec;
  spec.size = size;
  spec.seed = DeriveSeed(seed, "pixels");
  spec.background = ClassId(kRangeland);
  spec.background_color = DefaultColorModel(spec.background);
  constexpr std::array<std::uint8_t, 6> kPatchClasses = {
      kBareland, kDevelopedSpace, kTree, kWater, kAgricultureLand, kBuilding};
  const int min_extent = std::max(2, size / 8);
  const int max_extent = std::max(min_extent + 1, size * 7 / 16);
  auto pick = [&](int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(hi - lo + 1)));
  };
  for (int i = 0; i < 6; ++i) {
    const double kind = rng.UniformDouble();
    if (kind < 0.15) {
      const ClassId road(kRoad);
      const int thickness = pick(2, std::max(2, size / 12));
      const bool vertical = rng.UniformDouble() < 0.5;
      spec.layout.push_back(Primitive::Strip(vertical, pick(0, size - thickness), thickness,
                                             road, DefaultColorModel(road)));
      continue;
    }
    const ClassId label(kPatchClasses[rng.UniformInt(kPatchClasses.size())]);
    if (kind < 0.40) {
      const int radius = pick(std::max(2, min_extent / 2), std::max(3, max_extent / 2));
      spec.layout.push_back(Primitive::Disc(pick(radius, size - radius - 1),
                                            pick(radius, size - radius - 1), radius,
                                            label, DefaultColorModel(label)));
    } else {
      const int w = pick(min_extent, max_extent);
      const int h = pick(min_extent, max_extent);
      spec.layout.push_back(Primitive::Rectangle(pick(0, size - w), pick(0, size - h), w,
                                                 h, label, DefaultColorModel(label)));
    }
  }
  if (shifted) {
    Seam seam;
    seam.position = rng.Uniform(0.0, 0.5);
    const double gain = rng.Uniform(0.5, 0.65);
    for (int ch = 0; ch < 3; ++ch) {
      seam.gain[ch] = gain + rng.Uniform(-0.03, 0.03);
      seam.bias[ch] = rng.Uniform(-5.0, 5.0);
    }
    spec.seam = seam;
  }
  return spec;
}

World GenerateWorld(const WorldConfig& config) {
  if (config.n_cells < 1 || config.chips_per_cell < 1) {
    throw Error(ErrorCode::kInvalidArgument, "world needs at least one cell and chip");
  }
  if (!(config.shift_fraction >= 0.0 && config.shift_fraction <= 1.0)) {
    throw Error(ErrorCode::kRange, "shift fraction must lie in [0, 1]");
  }
  const int grid = static_cast<int>(std::ceil(std::sqrt(config.chips_per_cell)));
  const double chip_extent = config.chip_size * config.pixel_size_deg;
  if (chip_extent * grid >= config.cell_size_deg) {
    throw Error(ErrorCode::kInvalidArgument, "chips do not fit inside their cells");
  }
  const select::CellGrid cells(config.cell_size_deg);
  constexpr int kCellsPerRow = 8;
  World world;
  world.config = config;
  for (int cell = 0; cell < config.n_cells; ++cell) {
    const double cell_lon = config.origin.lon + (cell % kCellsPerRow) * config.cell_size_deg;
    const double cell_lat = config.origin.lat + (cell / kCellsPerRow) * config.cell_size_deg;
    for (int k = 0; k < config.chips_per_cell; ++k) {
      const double center_lon =
          cell_lon + ((k % grid) + 0.5) / grid * config.cell_size_deg;
      const double center_lat =
          cell_lat + config.cell_size_deg - ((k / grid) + 0.5) / grid * config.cell_size_deg;
      WorldChip chip;
      char id[48];
      std::snprintf(id, sizeof(id), "chip_c%03d_k%03d", cell, k);
      chip.chip_id = id;
      chip.geo = GeoTransform(center_lon - chip_extent / 2.0, center_lat + chip_extent / 2.0,
                              config.pixel_size_deg, -config.pixel_size_deg);
      chip.cell_id = cells.CellIdFor(chip.geo.PixelToWorld(config.chip_size / 2.0,
                                                           config.chip_size / 2.0));
      world.chips.push_back(std::move(chip));
    }
  }
  std::vector<std::size_t> order(world.chips.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(DeriveSeed(config.seed, "shift"));
  rng.Shuffle(std::span<std::size_t>(order));
  const auto n_shifted = static_cast<std::size_t>(
      std::floor(config.shift_fraction * static_cast<double>(world.chips.size()) + 1e-9));
  for (std::size_t i = 0; i < n_shifted; ++i) world.chips[order[i]].tag = ChipTag::kShifted;
  for (auto& chip : world.chips) {
    chip.spec = RandomSceneSpec(config.chip_size, DeriveSeed(config.seed, chip.chip_id),
                                chip.tag == ChipTag::kShifted);
  }
  return world;
}

std::vector<WorldManifestEntry> WriteWorld(const World& world,
                                           const std::filesystem::path& root) {
  std::vector<WorldManifestEntry> entries;
  for (const auto& chip : world.chips) {
    const Scene scene = GenerateScene(chip.spec);
    WorldManifestEntry entry;
    entry.chip_id = chip.chip_id;
    entry.cell_id = chip.cell_id;
    entry.rgb_path = "rgb/" + chip.chip_id + ".png";
    entry.truth_path = "truth/" + chip.chip_id + ".png";
    entry.tag = chip.tag;
    entry.geo = chip.geo;
    WriteFileBytes(root / entry.rgb_path, EncodeRgbPng(scene.rgb));
    WriteFileBytes(root / entry.truth_path, EncodeLabelPng(scene.truth));
    entries.push_back(std::move(entry));
  }
  WriteTextFile(root / kWorldManifestName, WorldManifestToJson(entries));
  return entries;
}

std::string WorldManifestToJson(const std::vector<WorldManifestEntry>& entries) {
  nlohmann::json chips = nlohmann::json::array();
  for (const auto& e : entries) {
    chips.push_back({{"chip_id", e.chip_id},
                     {"cell_id", e.cell_id},
                     {"rgb_path", e.rgb_path},
                     {"truth_path", e.truth_path},
                     {"tag", TagName(e.tag)},
                     {"geo", GeoJson(e.geo)}});
  }
  return nlohmann::json{{"chips", chips}}.dump(2) + "\n";
}

std::vector<WorldManifestEntry> ReadWorldManifest(const std::filesystem::path& path) {
  std::vector<WorldManifestEntry> entries;
  try {
    const auto doc = nlohmann::json::parse(ReadTextFile(path));
    for (const auto& item : doc.at("chips")) {
      WorldManifestEntry e;
      e.chip_id = item.at("chip_id").get<std::string>();
      e.cell_id = item.at("cell_id").get<std::string>();
      e.rgb_path = item.at("rgb_path").get<std::string>();
      e.truth_path = item.at("truth_path").get<std::string>();
      const auto tag = ParseTag(item.at("tag").get<std::string>());
      if (!tag) throw Error(ErrorCode::kParse, "unknown tag for chip " + e.chip_id);
      e.tag = *tag;
      const auto& g = item.at("geo");
      e.geo = GeoTransform(g.at(0).get<double>(), g.at(1).get<double>(),
                           g.at(2).get<double>(), g.at(3).get<double>());
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return entries;
}

}  // namespace landcover::synth
