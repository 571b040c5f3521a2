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

#ifndef LANDCOVER_TILES_H_
#define LANDCOVER_TILES_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

#include "landcover/raster.h"
#include "landcover/select.h"

namespace landcover::tiles {

inline constexpr int kMaxZoom = 30;
inline constexpr int kDefaultTileSize = 256;
// atan(sinh(pi)) in degrees; the latitude limit of Web-Mercator tiles.
inline constexpr double kMaxMercatorLatitude = 85.0511287798066;
// Accepted input latitude limit (the commonly quoted rounded value).
inline constexpr double kLatitudeInputLimit = 85.05113;
inline constexpr double kDefaultOverlayOpacity = 0.3;

// XYZ tile: top-left origin, y grows southward.
struct TileAddress {
  int z = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  // Throws kRange unless 0 <= z <= kMaxZoom and x, y < 2^z.
  static TileAddress Make(int z, std::int64_t x, std::int64_t y);

  friend auto operator<=>(const TileAddress&, const TileAddress&) = default;
};

struct GeoBounds {
  double lon_min = 0.0;
  double lat_min = 0.0;
  double lon_max = 0.0;
  double lat_max = 0.0;
};

// Throws kRange for latitudes beyond the Mercator limit, longitudes outside
// [-180, 180] or invalid zoom levels.
TileAddress LonLatToTile(double lon, double lat, int z);
GeoBounds TileBounds(const TileAddress& tile);

// Window start positions along one axis: multiples of stride, plus a final
// window clamped to end at the raster edge.
std::vector<int> WindowStarts(int extent, int chip_size, int stride);

// Throws kSize when chip_size exceeds either raster dimension, kInvalidArgument
// for a non-positive stride or chip size, or a stride above the chip size.
std::vector<Chip> ChipRaster(const RgbImage& raster, const GeoTransform& geo,
                             int chip_size, int stride,
                             const select::CellGrid& grid = select::CellGrid(),
                             std::string_view id_prefix = "chip");

using Pyramid = std::map<TileAddress, std::vector<std::uint8_t>>;

struct ZoomRange {
  int min = 0;
  int max = 0;
};

// Indexed label tiles, nearest-neighbor resampled; pixels outside the
// raster footprint are class 0 and tiles with no footprint pixel are
// omitted. Throws kInvalidArgument when the raster has no GeoTransform.
Pyramid BuildPyramid(const LabelRaster& labels, ZoomRange zooms,
                     int tile_size = kDefaultTileSize);

// RGB imagery tiles, black outside the footprint.
Pyramid BuildImageryPyramid(const RgbImage& image, const GeoTransform& geo,
                            ZoomRange zooms, int tile_size = kDefaultTileSize);

// Writes every tile to root/{z}/{x}/{y}.png.
void WritePyramid(const std::filesystem::path& root, const Pyramid& pyramid);
std::filesystem::path TilePath(const std::filesystem::path& root,
                               const TileAddress& tile);

// out = round((1 - opacity) * base + opacity * overlay) per channel.
// Throws kShape on size mismatch, kRange for opacity outside [0, 1].
RgbImage CompositeOverlay(const RgbImage& base, const RgbImage& overlay,
                          double opacity);

}  // namespace landcover::tiles

#endif  // LANDCOVER_TILES_H_
