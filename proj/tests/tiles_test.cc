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
#include <filesystem>
#include <set>

#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/png_codec.h"
#include "landcover/random.h"
#include "landcover/tiles.h"
#include "oracles.h"

namespace landcover::tiles {
namespace {

using testing_oracles::SlippyTile;
using testing_oracles::SlippyTileNorthLat;

TEST(TileMathTest, KnownAddresses) {
  const TileAddress tokyo = LonLatToTile(139.7670, 35.6814, 10);
  EXPECT_EQ(tokyo.x, 909u);
  EXPECT_EQ(tokyo.y, 403u);
  const TileAddress west = LonLatToTile(-180.0, 0.0, 3);
  EXPECT_EQ(west.x, 0u);
  EXPECT_EQ(west.y, 4u);
  for (double lon : {-180.0, -12.3, 0.0, 179.9}) {
    EXPECT_EQ(LonLatToTile(lon, 42.0, 0), (TileAddress{0, 0, 0}));
  }
}

TEST(TileMathTest, ReferenceConstant) {
  EXPECT_NEAR(kMaxMercatorLatitude, std::atan(std::sinh(M_PI)) * 180.0 / M_PI, 1e-13);
}

TEST(TileMathTest, AgreesWithOracleOnRandomPoints) {
  Rng rng(10);
  for (int i = 0; i < 5000; ++i) {
    const double lon = rng.Uniform(-180.0, 180.0);
    const double lat = rng.Uniform(-85.0, 85.0);
    const int z = static_cast<int>(rng.UniformInt(21));
    const TileAddress t = LonLatToTile(lon, lat, z);
    const auto [ox, oy] = SlippyTile(lon, lat, z);
    ASSERT_EQ(t.x, static_cast<std::uint32_t>(ox)) << lon << " " << lat << " " << z;
    ASSERT_EQ(t.y, static_cast<std::uint32_t>(oy)) << lon << " " << lat << " " << z;
  }
}

TEST(TileMathTest, RangeErrors) {
  EXPECT_THROW(LonLatToTile(0.0, 85.06, 3), Error);
  EXPECT_THROW(LonLatToTile(0.0, -86.0, 3), Error);
  EXPECT_THROW(LonLatToTile(181.0, 0.0, 3), Error);
  EXPECT_THROW(TileAddress::Make(3, 8, 0), Error);
  EXPECT_THROW(TileAddress::Make(-1, 0, 0), Error);
  EXPECT_THROW(TileAddress::Make(31, 0, 0), Error);
  EXPECT_NO_THROW(LonLatToTile(0.0, 85.05113, 3));
  EXPECT_EQ(LonLatToTile(180.0, 0.0, 2).x, 3u);
}

TEST(TileBoundsTest, RootAndFirstQuadrant) {
  const GeoBounds root = TileBounds({0, 0, 0});
  EXPECT_EQ(root.lon_min, -180.0);
  EXPECT_EQ(root.lon_max, 180.0);
  EXPECT_NEAR(root.lat_max, 85.05113, 1e-5);
  EXPECT_NEAR(root.lat_min, -85.05113, 1e-5);
  const GeoBounds q = TileBounds({1, 0, 0});
  EXPECT_EQ(q.lon_min, -180.0);
  EXPECT_EQ(q.lon_max, 0.0);
  EXPECT_NEAR(q.lat_min, 0.0, 1e-12);
  EXPECT_NEAR(q.lat_max, 85.05113, 1e-5);
}

TEST(TileBoundsTest, ForwardInverseRoundTrip) {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const int z = static_cast<int>(rng.UniformInt(kMaxZoom + 1));
    const std::uint64_t n = std::uint64_t{1} << z;
    const TileAddress t = TileAddress::Make(z, static_cast<std::int64_t>(rng.UniformInt(n)),
                                            static_cast<std::int64_t>(rng.UniformInt(n)));
    const GeoBounds b = TileBounds(t);
    EXPECT_NEAR(b.lat_max, SlippyTileNorthLat(t.y, z), 1e-9);
    EXPECT_NEAR(b.lat_min, SlippyTileNorthLat(t.y + 1, z), 1e-9);
    const double lon = 0.5 * (b.lon_min + b.lon_max);
    const double lat = 0.5 * (b.lat_min + b.lat_max);
    ASSERT_EQ(LonLatToTile(lon, lat, z), t) << z << " " << t.x << " " << t.y;
  }
}

TEST(ChipTest, WindowStarts) {
  EXPECT_EQ(WindowStarts(2048, 1024, 1024), (std::vector<int>{0, 1024}));
  EXPECT_EQ(WindowStarts(2048, 1024, 512), (std::vector<int>{0, 512, 1024}));
  EXPECT_EQ(WindowStarts(1500, 1024, 1024), (std::vector<int>{0, 476}));
  EXPECT_EQ(WindowStarts(64, 64, 7), (std::vector<int>{0}));
  EXPECT_THROW(WindowStarts(100, 101, 10), Error);
  EXPECT_THROW(WindowStarts(100, 10, 11), Error);
}

TEST(ChipTest, ChipRasterExamples) {
  const GeoTransform geo(139.0, 36.0, 1e-5, -1e-5);
  const RgbImage big(2048, 2048);
  const auto chips = ChipRaster(big, geo, 1024, 1024);
  ASSERT_EQ(chips.size(), 4u);
  std::set<std::pair<int, int>> offsets;
  for (const auto& c : chips) offsets.insert({c.offset.col, c.offset.row});
  EXPECT_EQ(offsets, (std::set<std::pair<int, int>>{{0, 0}, {1024, 0}, {0, 1024}, {1024, 1024}}));
  EXPECT_EQ(ChipRaster(big, geo, 1024, 512).size(), 9u);
  const auto clamped = ChipRaster(RgbImage(1500, 1500), geo, 1024, 1024);
  ASSERT_EQ(clamped.size(), 4u);
  for (const auto& c : clamped) {
    EXPECT_TRUE(c.offset.col == 0 || c.offset.col == 476);
    EXPECT_TRUE(c.offset.row == 0 || c.offset.row == 476);
    EXPECT_EQ(c.geo, geo.Offset(c.offset.col, c.offset.row));
    EXPECT_EQ(c.size(), 1024);
    EXPECT_EQ(c.cell_id, "cell_139_35");
  }
  try {
    ChipRaster(RgbImage(100, 100), geo, 101, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
  }
}

TEST(ChipTest, CoverageProperty) {
  Rng rng(13);
  const GeoTransform geo(10.0, 50.0, 1e-4, -1e-4);
  for (int trial = 0; trial < 60; ++trial) {
    const int chip = 1 + static_cast<int>(rng.UniformInt(24));
    const int w = chip + static_cast<int>(rng.UniformInt(50));
    const int h = chip + static_cast<int>(rng.UniformInt(50));
    const int stride = 1 + static_cast<int>(rng.UniformInt(chip));
    std::vector<std::uint8_t> px(3 * static_cast<std::size_t>(w) * h);
    for (auto& v : px) v = static_cast<std::uint8_t>(rng.UniformInt(256));
    const RgbImage img(w, h, px);
    std::vector<int> hits(static_cast<std::size_t>(w) * h, 0);
    for (const auto& c : ChipRaster(img, geo, chip, stride)) {
      ASSERT_EQ(c.rgb, img.Crop(c.offset.col, c.offset.row, chip, chip));
      for (int r = 0; r < chip; ++r) {
        for (int col = 0; col < chip; ++col) {
          ++hits[static_cast<std::size_t>(c.offset.row + r) * w + c.offset.col + col];
        }
      }
    }
    const int per_axis = (chip + stride - 1) / stride + 1;  // clamped window may add one
    for (int v : hits) {
      ASSERT_GE(v, 1);
      ASSERT_LE(v, per_axis * per_axis);
    }
  }
}

LabelRaster Uniform(int w, int h, std::uint8_t cls, const GeoTransform& geo) {
  return LabelRaster(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, cls), geo);
}

TEST(PyramidTest, UniformRasterGivesUniformTiles) {
  const GeoTransform geo(139.70, 35.70, 2e-4, -2e-4);
  const Pyramid p = BuildPyramid(Uniform(300, 200, kWater, geo), {11, 12});
  ASSERT_FALSE(p.empty());
  const std::set<std::uint8_t> allowed = {0, kWater};
  bool saw_water = false;
  for (const auto& [tile, bytes] : p) {
    const LabelRaster t = DecodeLabelPng(bytes);
    EXPECT_EQ(t.width(), kDefaultTileSize);
    for (auto v : t.data()) {
      ASSERT_TRUE(allowed.count(v));
      saw_water |= v == kWater;
    }
  }
  EXPECT_TRUE(saw_water);
}

TEST(PyramidTest, FootprintInsideOneTile) {
  const TileAddress target = LonLatToTile(139.7670, 35.6814, 12);
  const GeoBounds b = TileBounds(target);
  const double lon0 = b.lon_min + 0.25 * (b.lon_max - b.lon_min);
  const double lat0 = b.lat_max - 0.25 * (b.lat_max - b.lat_min);
  const double px = (b.lon_max - b.lon_min) / 200.0;
  const GeoTransform geo(lon0, lat0, px, -px);
  const Pyramid p = BuildPyramid(Uniform(50, 50, kBuilding, geo), {12, 12});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.begin()->first, target);
}

TEST(PyramidTest, TileIntersectionMatchesFootprintOracle) {
  const GeoTransform geo(139.69, 35.71, 3e-4, -3e-4);
  const int w = 170, h = 90;
  const Pyramid p = BuildPyramid(Uniform(w, h, kTree, geo), {13, 13});
  // Footprint corner tiles bound the emitted set.
  const TileAddress nw = LonLatToTile(geo.origin_lon(), geo.origin_lat(), 13);
  const LonLat se = geo.PixelToWorld(w, h);
  const TileAddress se_tile = LonLatToTile(se.lon, se.lat, 13);
  std::set<TileAddress> expected;
  for (auto x = nw.x; x <= se_tile.x; ++x) {
    for (auto y = nw.y; y <= se_tile.y; ++y) expected.insert({13, x, y});
  }
  std::set<TileAddress> got;
  for (const auto& [t, bytes] : p) got.insert(t);
  EXPECT_EQ(got, expected);
}

TEST(PyramidTest, RebuildIsByteIdenticalAndWritesLayout) {
  Rng rng(14);
  std::vector<std::uint8_t> data(120 * 80);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng.UniformInt(kNumClasses + 1));
  const LabelRaster labels(120, 80, data, GeoTransform(139.7, 35.7, 1e-4, -1e-4));
  const Pyramid a = BuildPyramid(labels, {10, 14});
  const Pyramid b = BuildPyramid(labels, {10, 14});
  EXPECT_EQ(a, b);
  const auto root = std::filesystem::temp_directory_path() / "landcover_pyramid_test";
  std::filesystem::remove_all(root);
  WritePyramid(root, a);
  for (const auto& [t, bytes] : a) {
    const auto path = root / std::to_string(t.z) / std::to_string(t.x) /
                      (std::to_string(t.y) + ".png");
    EXPECT_EQ(TilePath(root, t), path);
    EXPECT_EQ(ReadFileBytes(path), bytes);
  }
  std::filesystem::remove_all(root);
}

TEST(PyramidTest, RequiresGeoTransform) {
  try {
    BuildPyramid(LabelRaster(4, 4), {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(PyramidTest, ImageryTilesBlackOutside) {
  const GeoTransform geo(139.70, 35.70, 2e-4, -2e-4);
  const Pyramid p = BuildImageryPyramid(RgbImage(64, 64, Rgb{200, 10, 10}), geo, {12, 12});
  ASSERT_FALSE(p.empty());
  const RgbImage t = DecodeRgbPng(p.begin()->second);
  std::set<Rgb> colors;
  for (int r = 0; r < t.height(); ++r) {
    for (int c = 0; c < t.width(); ++c) colors.insert(t.at(c, r));
  }
  EXPECT_EQ(colors, (std::set<Rgb>{{0, 0, 0}, {200, 10, 10}}));
}

TEST(CompositeTest, Blend) {
  const RgbImage base(2, 2, Rgb{100, 100, 100});
  const RgbImage overlay(2, 2, Rgb{200, 0, 0});
  EXPECT_EQ(CompositeOverlay(base, overlay, 0.3).at(1, 1), (Rgb{130, 70, 70}));
  EXPECT_EQ(CompositeOverlay(base, overlay, 0.0), base);
  EXPECT_EQ(CompositeOverlay(base, overlay, 1.0), overlay);
  EXPECT_THROW(CompositeOverlay(base, RgbImage(3, 2), 0.3), Error);
  EXPECT_THROW(CompositeOverlay(base, overlay, 1.5), Error);
  EXPECT_EQ(kDefaultOverlayOpacity, 0.3);
}

}  // namespace
}  // namespace landcover::tiles
