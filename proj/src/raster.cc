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

#include "landcover/raster.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "landcover/error.h"

namespace landcover {

namespace {

void CheckDimensions(int width, int height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kSize, "negative raster dimensions " +
                                      std::to_string(width) + "x" +
                                      std::to_string(height));
  }
}

}  // namespace

GeoTransform::GeoTransform(double origin_lon, double origin_lat,
                           double pixel_size_x, double pixel_size_y)
    : origin_lon_(origin_lon),
      origin_lat_(origin_lat),
      pixel_size_x_(pixel_size_x),
      pixel_size_y_(pixel_size_y) {
  if (!std::isfinite(origin_lon) || !std::isfinite(origin_lat) ||
      !std::isfinite(pixel_size_x) || !std::isfinite(pixel_size_y)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite geotransform");
  }
  if (!(pixel_size_x > 0.0) || pixel_size_y == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "geotransform requires pixel_size_x > 0 and pixel_size_y != 0");
  }
}

LonLat GeoTransform::PixelToWorld(double col, double row) const {
  return {origin_lon_ + col * pixel_size_x_, origin_lat_ + row * pixel_size_y_};
}

PixelCoord GeoTransform::WorldToPixel(double lon, double lat) const {
  return {(lon - origin_lon_) / pixel_size_x_, (lat - origin_lat_) / pixel_size_y_};
}

LonLat GeoTransform::PixelCenter(int col, int row) const {
  return PixelToWorld(col + 0.5, row + 0.5);
}

GeoTransform GeoTransform::Offset(int col, int row) const {
  const LonLat corner = PixelToWorld(col, row);
  return GeoTransform(corner.lon, corner.lat, pixel_size_x_, pixel_size_y_);
}

LabelRaster::LabelRaster(int width, int height)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, 0);
}

LabelRaster::LabelRaster(int width, int height, std::vector<std::uint8_t> data,
                         std::optional<GeoTransform> geo)
    : width_(width), height_(height), data_(std::move(data)), geo_(geo) {
  CheckDimensions(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kSize,
                "label data has " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  for (std::uint8_t v : data_) {
    if (v > kNumClasses) {
      throw Error(ErrorCode::kInvalidClass,
                  "label raster contains class index " + std::to_string(v));
    }
  }
}

ProbRaster::ProbRaster(int width, int height, int num_classes,
                       std::vector<float> data, double tolerance)
    : width_(width),
      height_(height),
      num_classes_(num_classes),
      data_(std::move(data)) {
  CheckDimensions(width, height);
  if (num_classes < 1) {
    throw Error(ErrorCode::kSize, "probability raster needs at least 1 class");
  }
  const std::size_t pixels = pixel_count();
  if (data_.size() != pixels * num_classes) {
    throw Error(ErrorCode::kSize,
                "probability data has " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(pixels * num_classes));
  }
  for (std::size_t p = 0; p < pixels; ++p) {
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
      const float v = data_[c * pixels + p];
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw Error(ErrorCode::kNormalization,
                    "probability " + std::to_string(v) + " outside [0,1] at pixel " +
                        std::to_string(p));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw Error(ErrorCode::kNormalization,
                  "probabilities at pixel " + std::to_string(p) + " sum to " +
                      std::to_string(sum));
    }
  }
}

std::span<const float> ProbRaster::plane(int class_offset) const {
  return std::span<const float>(data_).subspan(
      static_cast<std::size_t>(class_offset) * pixel_count(), pixel_count());
}

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), data_(std::move(interleaved)) {
  CheckDimensions(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorCode::kSize, "rgb data size does not match dimensions");
  }
}

RgbImage RgbImage::Crop(int col, int row, int width, int height) const {
  if (col < 0 || row < 0 || width < 0 || height < 0 || col + width > width_ ||
      row + height > height_) {
    throw Error(ErrorCode::kSize, "crop window outside image");
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height * 3);
  for (int r = 0; r < height; ++r) {
    const auto src = data_.begin() + 3 * index(col, row + r);
    std::copy(src, src + 3 * width,
              out.begin() + static_cast<std::size_t>(r) * width * 3);
  }
  return RgbImage(width, height, std::move(out));
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  CheckDimensions(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  CheckDimensions(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kSize, "mask size does not match dimensions");
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BinaryMask::CountSet() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

LonLat Chip::Center() const {
  return geo.PixelToWorld(rgb.width() / 2.0, rgb.height() / 2.0);
}

}  // namespace landcover
