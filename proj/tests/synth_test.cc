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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/png_codec.h"
#include "landcover/synth.h"
#include "scratch.h"

namespace landcover::synth {
namespace {

using testing_oracles::ScratchDir;

SceneSpec TwoClassSpec(double jitter) {
  SceneSpec spec;
  spec.size = 32;
  spec.background_color = {Rgb{100, 150, 200}, jitter};
  spec.layout.push_back(Primitive::Rectangle(4, 4, 10, 6, ClassId(kWater), {Rgb{20, 40, 60}, jitter}));
  spec.layout.push_back(Primitive::Disc(24, 24, 5, ClassId(kTree), {Rgb{30, 90, 30}, jitter}));
  spec.layout.push_back(Primitive::Strip(true, 18, 2, ClassId(kRoad), {Rgb{90, 90, 90}, jitter}));
  spec.seed = 5;
  return spec;
}

TEST(SceneTest, DeterministicForSeed) {
  const auto spec = TwoClassSpec(10.0);
  const Scene a = GenerateScene(spec);
  const Scene b = GenerateScene(spec);
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.truth, b.truth);
  auto other = spec;
  other.seed = 6;
  EXPECT_NE(GenerateScene(other).rgb, a.rgb);
  EXPECT_EQ(GenerateScene(other).truth, a.truth);
}

TEST(SceneTest, ZeroJitterGivesExactColors) {
  const Scene s = GenerateScene(TwoClassSpec(0.0));
  const std::map<int, Rgb> expected{{kRangeland, {100, 150, 200}}, {kWater, {20, 40, 60}},
                                    {kTree, {30, 90, 30}}, {kRoad, {90, 90, 90}}};
  std::set<int> seen;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      const int label = s.truth.at(x, y);
      seen.insert(label);
      ASSERT_EQ(s.rgb.at(x, y), expected.at(label)) << x << "," << y;
    }
  }
  EXPECT_EQ(seen.size(), 4u);
  // painter's order: the strip crosses the disc and wins
  EXPECT_EQ(s.truth.at(18, 24), kRoad);
  EXPECT_EQ(s.truth.at(5, 5), kWater);
  EXPECT_EQ(s.truth.at(24, 24), kTree);
  EXPECT_EQ(s.truth.at(0, 31), kRangeland);
}

TEST(SceneTest, SeamScalesRightHalf) {
  SceneSpec spec;
  spec.size = 64;
  spec.background_color = {Rgb{100, 100, 100}, 10.0};
  spec.seam = Seam{0.5, {1.4, 1.4, 1.4}, {0, 0, 0}};
  spec.seed = 9;
  const Scene s = GenerateScene(spec);
  double left = 0, right = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const Rgb p = s.rgb.at(x, y);
      (x < 32 ? left : right) += p.r + p.g + p.b;
    }
  }
  EXPECT_NEAR(right / left, 1.4, 0.05 * 1.4);
}

TEST(SceneTest, ColorStatisticsMatchModel) {
  SceneSpec spec;
  spec.size = 128;
  const double sigma = 12.0;
  spec.background_color = {Rgb{120, 80, 160}, sigma};
  spec.seed = 77;
  const Scene s = GenerateScene(spec);
  const double n = 128.0 * 128.0;
  double sum[3] = {0, 0, 0};
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) {
      const Rgb p = s.rgb.at(x, y);
      sum[0] += p.r;
      sum[1] += p.g;
      sum[2] += p.b;
    }
  }
  const double mean[3] = {120, 80, 160};
  for (int c = 0; c < 3; ++c) {
    // rounding to integers adds no bias for an integer mean
    EXPECT_LT(std::abs(sum[c] / n - mean[c]), 4 * sigma / std::sqrt(n)) << c;
  }
}

TEST(SceneTest, RejectsBadSpecs) {
  auto code = [](const SceneSpec& spec) {
    try {
      GenerateScene(spec);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  auto spec = TwoClassSpec(1.0);
  spec.layout.push_back(Primitive::Rectangle(30, 30, 5, 5, ClassId(kWater), {}));
  EXPECT_EQ(code(spec), ErrorCode::kRange);
  spec = TwoClassSpec(1.0);
  spec.seam = Seam{0.5, {1.0, 0.0, 1.0}, {}};
  EXPECT_EQ(code(spec), ErrorCode::kInvalidArgument);
  spec.seam = Seam{1.5, {1.0, 1.0, 1.0}, {}};
  EXPECT_EQ(code(spec), ErrorCode::kRange);
  spec = TwoClassSpec(1.0);
  spec.size = 0;
  spec.layout.clear();
  EXPECT_EQ(code(spec), ErrorCode::kInvalidArgument);
}

TEST(SceneTest, TagNames) {
  EXPECT_EQ(TagName(ChipTag::kClean), "clean");
  EXPECT_EQ(TagName(ChipTag::kShifted), "shifted");
  EXPECT_EQ(ParseTag("shifted"), ChipTag::kShifted);
  EXPECT_FALSE(ParseTag("dirty").has_value());
}

TEST(SceneTest, RandomSpecsStayInBounds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto spec = RandomSceneSpec(64, seed, seed % 2 == 1);
    EXPECT_EQ(spec.seam.has_value(), seed % 2 == 1);
    EXPECT_NO_THROW(GenerateScene(spec));
  }
}

TEST(WorldTest, ShiftFractionAndCells) {
  WorldConfig cfg;
  cfg.n_cells = 10;
  cfg.chips_per_cell = 4;
  cfg.shift_fraction = 0.25;
  cfg.seed = 4;
  const World w = GenerateWorld(cfg);
  ASSERT_EQ(w.chips.size(), 40u);
  int shifted = 0;
  std::map<std::string, int> per_cell;
  std::set<std::string> ids;
  for (const auto& c : w.chips) {
    shifted += c.tag == ChipTag::kShifted;
    ++per_cell[c.cell_id];
    ids.insert(c.chip_id);
    EXPECT_EQ(c.spec.seam.has_value(), c.tag == ChipTag::kShifted);
  }
  EXPECT_EQ(shifted, 10);
  EXPECT_EQ(ids.size(), 40u);
  ASSERT_EQ(per_cell.size(), 10u);
  for (const auto& [cell, n] : per_cell) EXPECT_EQ(n, 4) << cell;

  cfg.shift_fraction = 0.0;
  for (const auto& c : GenerateWorld(cfg).chips) EXPECT_EQ(c.tag, ChipTag::kClean);
  cfg.shift_fraction = 1.0;
  for (const auto& c : GenerateWorld(cfg).chips) EXPECT_EQ(c.tag, ChipTag::kShifted);
}

TEST(WorldTest, ChipsDoNotOverlap) {
  WorldConfig cfg;
  cfg.n_cells = 3;
  cfg.chips_per_cell = 5;
  const World w = GenerateWorld(cfg);
  const double span = cfg.chip_size * cfg.pixel_size_deg;
  for (std::size_t i = 0; i < w.chips.size(); ++i) {
    for (std::size_t j = i + 1; j < w.chips.size(); ++j) {
      const auto& a = w.chips[i].geo;
      const auto& b = w.chips[j].geo;
      const bool apart = std::abs(a.origin_lon() - b.origin_lon()) >= span - 1e-12 ||
                         std::abs(a.origin_lat() - b.origin_lat()) >= span - 1e-12;
      EXPECT_TRUE(apart) << w.chips[i].chip_id << " " << w.chips[j].chip_id;
    }
  }
}

TEST(WorldTest, WriteAndReadBack) {
  ScratchDir dir("synth");
  WorldConfig cfg;
  cfg.n_cells = 2;
  cfg.chips_per_cell = 2;
  cfg.chip_size = 32;
  cfg.seed = 11;
  const World w = GenerateWorld(cfg);
  const auto written = WriteWorld(w, dir.path());
  const auto read = ReadWorldManifest(dir / kWorldManifestName);
  ASSERT_EQ(read.size(), 4u);
  for (std::size_t i = 0; i < read.size(); ++i) {
    EXPECT_EQ(read[i].chip_id, written[i].chip_id);
    EXPECT_EQ(read[i].tag, written[i].tag);
    EXPECT_EQ(read[i].geo, written[i].geo);
    const Scene expect = GenerateScene(w.chips[i].spec);
    EXPECT_EQ(DecodeRgbPng(ReadFileBytes(dir / read[i].rgb_path)), expect.rgb);
    EXPECT_EQ(DecodeLabelPng(ReadFileBytes(dir / read[i].truth_path)), expect.truth);
  }
  EXPECT_THROW(ReadWorldManifest(dir / "missing.json"), Error);
}

}  // namespace
}  // namespace landcover::synth
