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
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <set>

#include "landcover/classes.h"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/oemp_codec.h"
#include "landcover/png_codec.h"
#include "landcover/random.h"
#include "landcover/raster.h"

namespace landcover {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

LabelRaster RandomLabels(Rng& rng, int w, int h) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng.UniformInt(kNumClasses + 1));
  return LabelRaster(w, h, data);
}

// Locates a PNG chunk; returns the offset of its data.
std::size_t FindChunk(const std::vector<std::uint8_t>& png, const char* type,
                      std::uint32_t* length) {
  std::size_t pos = 8;
  while (pos + 8 <= png.size()) {
    const std::uint32_t len = (png[pos] << 24) | (png[pos + 1] << 16) |
                              (png[pos + 2] << 8) | png[pos + 3];
    if (std::memcmp(&png[pos + 4], type, 4) == 0) {
      *length = len;
      return pos + 8;
    }
    pos += 12 + len;
  }
  return 0;
}

void FixCrc(std::vector<std::uint8_t>& png, std::size_t data_offset, std::uint32_t length) {
  const uLong crc = crc32(0L, &png[data_offset - 4], length + 4);
  const std::size_t at = data_offset + length;
  png[at] = static_cast<std::uint8_t>(crc >> 24);
  png[at + 1] = static_cast<std::uint8_t>(crc >> 16);
  png[at + 2] = static_cast<std::uint8_t>(crc >> 8);
  png[at + 3] = static_cast<std::uint8_t>(crc);
}

TEST(ClassesTest, PaletteMatchesNormativeValues) {
  const std::array<Rgb, 9> expected = {{{0, 0, 0},
                                        {128, 0, 0},
                                        {0, 255, 36},
                                        {148, 148, 148},
                                        {255, 255, 255},
                                        {34, 97, 38},
                                        {0, 69, 255},
                                        {75, 181, 73},
                                        {222, 31, 7}}};
  EXPECT_EQ(Palette(), expected);
}

TEST(ClassesTest, PaletteIsInjectiveAndInvertible) {
  std::set<Rgb> seen;
  for (int i = 0; i <= kNumClasses; ++i) {
    const Rgb c = PaletteColor(ClassId(i));
    EXPECT_TRUE(seen.insert(c).second);
    ASSERT_TRUE(ClassFromColor(c).has_value());
    EXPECT_EQ(ClassFromColor(c)->index(), i);
  }
  EXPECT_FALSE(ClassFromColor({1, 2, 3}).has_value());
}

TEST(ClassesTest, NamesAndParsing) {
  EXPECT_EQ(ClassName(ClassId(kWater)), "water");
  EXPECT_EQ(ParseClass("Agriculture_Land")->index(), kAgricultureLand);
  EXPECT_EQ(ParseClass("8")->index(), kBuilding);
  EXPECT_EQ(ParseClass("developed space")->index(), kDevelopedSpace);
  EXPECT_FALSE(ParseClass("9").has_value());
  EXPECT_FALSE(ParseClass("lava").has_value());
  for (int i = 0; i <= kNumClasses; ++i) {
    EXPECT_EQ(ParseClass(ClassName(ClassId(i)))->index(), i);
  }
}

TEST(ClassesTest, OutOfRangeIndexRejected) {
  EXPECT_EQ(CodeOf([] { ClassId(9); }), ErrorCode::kInvalidClass);
  EXPECT_EQ(CodeOf([] { ClassId(-1); }), ErrorCode::kInvalidClass);
  EXPECT_EQ(CodeOf([] { LabelRaster(1, 1, {9}); }), ErrorCode::kInvalidClass);
  EXPECT_EQ(CodeOf([] { LabelRaster(2, 2, {1, 2, 3}); }), ErrorCode::kSize);
}

TEST(RasterTest, GeoTransformRoundTrip) {
  const GeoTransform geo(139.5, 35.9, 1e-4, -1e-4);
  const LonLat p = geo.PixelToWorld(10.0, 20.0);
  EXPECT_DOUBLE_EQ(p.lon, 139.5 + 10 * 1e-4);
  EXPECT_DOUBLE_EQ(p.lat, 35.9 - 20 * 1e-4);
  const PixelCoord back = geo.WorldToPixel(p.lon, p.lat);
  EXPECT_NEAR(back.col, 10.0, 1e-9);
  EXPECT_NEAR(back.row, 20.0, 1e-9);
  const LonLat c = geo.PixelCenter(0, 0);
  EXPECT_DOUBLE_EQ(c.lon, 139.5 + 0.5e-4);
  EXPECT_EQ(geo.Offset(3, 4).PixelToWorld(0, 0).lon, geo.PixelToWorld(3, 4).lon);
  EXPECT_EQ(CodeOf([] { GeoTransform(0, 0, 0, -1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { GeoTransform(0, 0, 1, 0); }), ErrorCode::kInvalidArgument);
}

TEST(RasterTest, ProbRasterValidation) {
  EXPECT_NO_THROW(ProbRaster(1, 1, 2, {0.25f, 0.75f}));
  EXPECT_EQ(CodeOf([] { ProbRaster(1, 1, 2, {0.5f, 0.6f}); }), ErrorCode::kNormalization);
  EXPECT_EQ(CodeOf([] { ProbRaster(1, 1, 2, {-0.1f, 1.1f}); }), ErrorCode::kNormalization);
  EXPECT_EQ(CodeOf([] { ProbRaster(2, 1, 2, {0.5f, 0.5f}); }), ErrorCode::kSize);
  const ProbRaster p(2, 1, 2, {0.1f, 0.2f, 0.9f, 0.8f});
  EXPECT_FLOAT_EQ(p.at(1, 0), 0.9f);
  EXPECT_FLOAT_EQ(p.plane(0)[1], 0.2f);
}

TEST(RasterTest, CropCopiesWindow) {
  RgbImage img(4, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      img.set(c, r, {static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(r), 7});
    }
  }
  const RgbImage crop = img.Crop(1, 1, 2, 2);
  ASSERT_EQ(crop.width(), 2);
  EXPECT_EQ(crop.at(1, 1), (Rgb{2, 2, 7}));
}

TEST(LabelPngTest, RoundTripIsIdentity) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 1 + static_cast<int>(rng.UniformInt(70));
    const int h = 1 + static_cast<int>(rng.UniformInt(70));
    const LabelRaster raster = RandomLabels(rng, w, h);
    const auto bytes = EncodeLabelPng(raster);
    EXPECT_EQ(DecodeLabelPng(bytes), raster);
    EXPECT_EQ(EncodeLabelPng(raster), bytes);
  }
}

TEST(LabelPngTest, PaletteEntryFiveIsTree) {
  const LabelRaster raster(2, 2, {1, 2, 5, 8});
  const auto png = EncodeLabelPng(raster);
  std::uint32_t len = 0;
  const std::size_t plte = FindChunk(png, "PLTE", &len);
  ASSERT_NE(plte, 0u);
  ASSERT_GE(len, 18u);
  EXPECT_EQ(png[plte + 15], 34);
  EXPECT_EQ(png[plte + 16], 97);
  EXPECT_EQ(png[plte + 17], 38);
  ASSERT_GE(len, 21u);
  // Water sits at entry 6.
  EXPECT_EQ(png[plte + 18], 0);
  EXPECT_EQ(png[plte + 19], 69);
  EXPECT_EQ(png[plte + 20], 255);
}

TEST(LabelPngTest, ForeignPaletteRejectedWithColor) {
  auto png = EncodeLabelPng(LabelRaster(2, 1, {1, 2}));
  std::uint32_t len = 0;
  const std::size_t plte = FindChunk(png, "PLTE", &len);
  ASSERT_NE(plte, 0u);
  png[plte + 3] = 1;  // entry 1 becomes (1,0,0)
  FixCrc(png, plte, len);
  try {
    DecodeLabelPng(png);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPalette);
    EXPECT_NE(std::string(e.what()).find("(1,0,0)"), std::string::npos) << e.what();
  }
}

TEST(LabelPngTest, NonPngAndTruncatedRejected) {
  const std::vector<std::uint8_t> junk = {'n', 'o', 't', ' ', 'p', 'n', 'g', '!', 0, 1};
  EXPECT_EQ(CodeOf([&] { DecodeLabelPng(junk); }), ErrorCode::kFormat);
  auto png = EncodeLabelPng(LabelRaster(8, 8));
  png.resize(png.size() / 2);
  EXPECT_EQ(CodeOf([&] { DecodeLabelPng(png); }), ErrorCode::kFormat);
}

TEST(LabelPngTest, RgbPngIsNotALabelPng) {
  const auto png = EncodeRgbPng(RgbImage(2, 2, Rgb{1, 2, 3}));
  EXPECT_EQ(CodeOf([&] { DecodeLabelPng(png); }), ErrorCode::kFormat);
}

TEST(RgbPngTest, RoundTripAndPaletteExpansion) {
  Rng rng(5);
  std::vector<std::uint8_t> px(3 * 5 * 7);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng.UniformInt(256));
  const RgbImage img(5, 7, px);
  EXPECT_EQ(DecodeRgbPng(EncodeRgbPng(img)), img);
  const LabelRaster labels(2, 1, {kWater, kBuilding});
  const RgbImage rendered = DecodeRgbPng(EncodeLabelPng(labels));
  EXPECT_EQ(rendered, RenderLabels(labels));
  EXPECT_EQ(rendered.at(0, 0), PaletteColor(ClassId(kWater)));
}

TEST(RgbPngTest, TransparentTileDecodesToZero) {
  const RgbImage img = DecodeRgbPng(EncodeTransparentPng(256, 256));
  EXPECT_EQ(img.width(), 256);
  EXPECT_EQ(img, RgbImage(256, 256));
}

ProbRaster RandomProbs(Rng& rng, int w, int h, int k) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<float> data(n * k);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<double> raw(k);
    double sum = 0;
    for (auto& v : raw) sum += v = rng.UniformDouble() + 1e-3;
    for (int c = 0; c < k; ++c) data[c * n + p] = static_cast<float>(raw[c] / sum);
  }
  return ProbRaster(w, h, k, data);
}

TEST(OempTest, RoundTripIsBitExact) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbRaster p = RandomProbs(rng, 1 + static_cast<int>(rng.UniformInt(20)),
                                     1 + static_cast<int>(rng.UniformInt(20)),
                                     1 + static_cast<int>(rng.UniformInt(kNumClasses)));
    const auto bytes = EncodeProbRaster(p);
    EXPECT_EQ(bytes.size(), kOempHeaderSize + 4 * p.data().size());
    const ProbRaster q = DecodeProbRaster(bytes);
    ASSERT_EQ(q.data().size(), p.data().size());
    EXPECT_EQ(std::memcmp(q.data().data(), p.data().data(), 4 * p.data().size()), 0);
  }
}

TEST(OempTest, HeaderLayout) {
  const ProbRaster p(3, 2, 1, std::vector<float>(6, 1.0f));
  const auto b = EncodeProbRaster(p);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "OEMP");
  EXPECT_EQ(b[4] | (b[5] << 8), 1);
  EXPECT_EQ(b[6], 3);
  EXPECT_EQ(b[10], 2);
  EXPECT_EQ(b[14], 1);
  EXPECT_EQ(b[15] | b[16] | b[17], 0);
  // 1.0f little-endian = 00 00 80 3f
  EXPECT_EQ(b[18 + 2], 0x80);
  EXPECT_EQ(b[18 + 3], 0x3f);
}

TEST(OempTest, Errors) {
  Rng rng(9);
  auto bytes = EncodeProbRaster(RandomProbs(rng, 10, 10, 2));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { DecodeProbRaster(bad_magic); }), ErrorCode::kFormat);
  // Header claims 10x10 but only 99 pixels per plane follow.
  auto short_payload = bytes;
  short_payload.resize(short_payload.size() - 2 * 4);
  EXPECT_EQ(CodeOf([&] { DecodeProbRaster(short_payload); }), ErrorCode::kSize);
  auto unnormalized = EncodeProbRaster(ProbRaster(1, 1, 2, {0.5f, 0.5f}));
  const float big = 0.6f;
  std::memcpy(&unnormalized[18], &big, 4);
  EXPECT_EQ(CodeOf([&] { DecodeProbRaster(unnormalized); }), ErrorCode::kNormalization);
  // Within the decode tolerance.
  auto close = EncodeProbRaster(ProbRaster(1, 1, 2, {0.5f, 0.5f}));
  const float near = 0.5005f;
  std::memcpy(&close[18], &near, 4);
  EXPECT_NO_THROW(DecodeProbRaster(close));
}

TEST(RngTest, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.Next(), b.Next());
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.UniformInt(7), 7u);
  }
  std::vector<int> items(50);
  std::iota(items.begin(), items.end(), 0);
  r.Shuffle(std::span<int>(items));
  std::vector<int> sorted = items;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(1, "b"));
  EXPECT_NE(DeriveSeed(1, "a"), DeriveSeed(2, "a"));
  EXPECT_EQ(DeriveSeed(7, "chip"), DeriveSeed(7, "chip"));
}

TEST(RngTest, NormalMoments) {
  Rng r(8);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.Normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(IoTest, MissingFileNamesPath) {
  const auto path = std::filesystem::temp_directory_path() / "landcover_no_such_file.bin";
  try {
    ReadFileBytes(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}

TEST(IoTest, WriteCreatesParents) {
  const auto root = std::filesystem::temp_directory_path() / "landcover_io_test";
  std::filesystem::remove_all(root);
  WriteTextFile(root / "a" / "b.txt", "hello");
  EXPECT_EQ(ReadTextFile(root / "a" / "b.txt"), "hello");
  EXPECT_EQ(ResolvePath(root, "x.txt"), root / "x.txt");
  EXPECT_EQ(ResolvePath(root, "/abs/x"), std::filesystem::path("/abs/x"));
  std::filesystem::remove_all(root);
}

}  // namespace
}  // namespace landcover
