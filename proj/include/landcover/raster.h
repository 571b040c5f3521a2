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

#ifndef LANDCOVER_RASTER_H_
#define LANDCOVER_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landcover/classes.h"

namespace landcover {

struct LonLat {
  double lon = 0.0;
  double lat = 0.0;
};

struct PixelCoord {
  double col = 0.0;
  double row = 0.0;
};

// Affine pixel -> world mapping for north-up equirectangular rasters:
//   lon = origin_lon + col * pixel_size_x
//   lat = origin_lat + row * pixel_size_y
// (col, row) are continuous; pixel centers sit at (c + 0.5, r + 0.5).
class GeoTransform {
 public:
  // Throws Error(kInvalidArgument) unless pixel_size_x > 0 and
  // pixel_size_y != 0 and all values are finite.
  GeoTransform(double origin_lon, double origin_lat, double pixel_size_x,
               double pixel_size_y);

  double origin_lon() const { return origin_lon_; }
  double origin_lat() const { return origin_lat_; }
  double pixel_size_x() const { return pixel_size_x_; }
  double pixel_size_y() const { return pixel_size_y_; }

  LonLat PixelToWorld(double col, double row) const;
  PixelCoord WorldToPixel(double lon, double lat) const;
  LonLat PixelCenter(int col, int row) const;

  // Transform of the sub-raster whose top-left pixel is (col, row).
  GeoTransform Offset(int col, int row) const;

  friend bool operator==(const GeoTransform&, const GeoTransform&) = default;

 private:
  double origin_lon_;
  double origin_lat_;
  double pixel_size_x_;
  double pixel_size_y_;
};

// Per-pixel class indices, row-major, origin top-left.
class LabelRaster {
 public:
  LabelRaster() = default;
  // Filled with class 0.
  LabelRaster(int width, int height);
  // Throws kSize if data.size() != width*height, kInvalidClass on any index
  // above kNumClasses.
  LabelRaster(int width, int height, std::vector<std::uint8_t> data,
              std::optional<GeoTransform> geo = std::nullopt);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  std::span<const std::uint8_t> data() const { return data_; }

  std::uint8_t at(int col, int row) const { return data_[index(col, row)]; }
  void set(int col, int row, ClassId id) { data_[index(col, row)] = id.index(); }

  const std::optional<GeoTransform>& geo() const { return geo_; }
  void set_geo(std::optional<GeoTransform> geo) { geo_ = geo; }

  friend bool operator==(const LabelRaster&, const LabelRaster&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
  std::optional<GeoTransform> geo_;
};

inline constexpr double kProbabilityTolerance = 1e-5;
inline constexpr double kDecodedProbabilityTolerance = 1e-3;

// Per-pixel class probabilities over classes 1..k, stored as k row-major
// planes of float32 (plane c-1 holds class c).
class ProbRaster {
 public:
  ProbRaster() = default;
  // Validates values in [0,1] and per-pixel sums within `tolerance` of 1.
  ProbRaster(int width, int height, int num_classes, std::vector<float> data,
             double tolerance = kProbabilityTolerance);

  int width() const { return width_; }
  int height() const { return height_; }
  int num_classes() const { return num_classes_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::span<const float> data() const { return data_; }
  std::span<const float> plane(int class_offset) const;

  // Probability of class (class_offset + 1) at the given pixel.
  float at(int class_offset, std::size_t pixel) const {
    return data_[static_cast<std::size_t>(class_offset) * pixel_count() + pixel];
  }

  friend bool operator==(const ProbRaster&, const ProbRaster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int num_classes_ = 0;
  std::vector<float> data_;
};

// 8-bit interleaved RGB image, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});
  RgbImage(int width, int height, std::vector<std::uint8_t> interleaved);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> data() const { return data_; }

  Rgb at(int col, int row) const {
    const std::size_t i = 3 * index(col, row);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int col, int row, Rgb color) {
    const std::size_t i = 3 * index(col, row);
    data_[i] = color.r;
    data_[i + 1] = color.g;
    data_[i + 2] = color.b;
  }

  RgbImage Crop(int col, int row, int width, int height) const;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Two-valued raster (0/1), used for footprint references and class masks.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool at(int col, int row) const {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int col, int row, bool value) {
    bits_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
  }
  std::size_t CountSet() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

inline constexpr int kDefaultChipSize = 1024;

struct ChipOffset {
  int col = 0;
  int row = 0;
  friend bool operator==(const ChipOffset&, const ChipOffset&) = default;
};

// A square window cut from a geo-referenced raster.
struct Chip {
  std::string id;
  RgbImage rgb;
  ChipOffset offset;
  GeoTransform geo{0.0, 0.0, 1.0, -1.0};
  std::string cell_id;

  int size() const { return rgb.width(); }
  // Geographic center of the chip.
  LonLat Center() const;
};

}  // namespace landcover

#endif  // LANDCOVER_RASTER_H_
