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

#include "landcover/tiles.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/png_codec.h"

namespace landcover::tiles {

namespace {

constexpr double kPi = std::numbers::pi;

double DegToRad(double deg) { return deg * kPi / 180.0; }
double RadToDeg(double rad) { return rad * 180.0 / kPi; }

void CheckZoom(int z) {
  if (z < 0 || z > kMaxZoom) {
    throw Error(ErrorCode::kRange, "zoom " + std::to_string(z) + " outside 0.." +
                                       std::to_string(kMaxZoom));
  }
}

// Latitude of the northern edge of tile row `y_fraction * 2^z`.
double MercatorRowToLat(double y_fraction) {
  return RadToDeg(std::atan(std::sinh(kPi * (1.0 - 2.0 * y_fraction))));
}

GeoBounds Footprint(const GeoTransform& geo, int width, int height) {
  const LonLat a = geo.PixelToWorld(0, 0);
  const LonLat b = geo.PixelToWorld(width, height);
  return {std::min(a.lon, b.lon), std::min(a.lat, b.lat), std::max(a.lon, b.lon),
          std::max(a.lat, b.lat)};
}

// Calls emit(tile, lookup) for every tile overlapping the footprint, where
// lookup maps tile pixel (i, j) to raster (col, row) or (-1, -1) outside.
template <typename Render>
void ForEachTile(const GeoTransform& geo, int width, int height, ZoomRange zooms,
                 int tile_size, Render&& render) {
  if (zooms.min > zooms.max) {
    throw Error(ErrorCode::kInvalidArgument, "empty zoom range");
  }
  CheckZoom(zooms.min);
  CheckZoom(zooms.max);
  if (tile_size < 1) throw Error(ErrorCode::kInvalidArgument, "tile size must be >= 1");
  const GeoBounds fp = Footprint(geo, width, height);
  const double lon_lo = std::clamp(fp.lon_min, -180.0, 180.0);
  const double lon_hi = std::clamp(fp.lon_max, -180.0, 180.0);
  const double lat_lo = std::clamp(fp.lat_min, -kMaxMercatorLatitude, kMaxMercatorLatitude);
  const double lat_hi = std::clamp(fp.lat_max, -kMaxMercatorLatitude, kMaxMercatorLatitude);
  if (lon_lo >= lon_hi || lat_lo >= lat_hi) return;
  for (int z = zooms.min; z <= zooms.max; ++z) {
    const std::int64_t n = std::int64_t{1} << z;
    const TileAddress nw = LonLatToTile(lon_lo, lat_hi, z);
    const TileAddress se = LonLatToTile(lon_hi, lat_lo, z);
    const std::int64_t x0 = std::max<std::int64_t>(0, std::int64_t{nw.x} - 1);
    const std::int64_t x1 = std::min<std::int64_t>(n - 1, std::int64_t{se.x} + 1);
    const std::int64_t y0 = std::max<std::int64_t>(0, std::int64_t{nw.y} - 1);
    const std::int64_t y1 = std::min<std::int64_t>(n - 1, std::int64_t{se.y} + 1);
    for (std::int64_t ty = y0; ty <= y1; ++ty) {
      for (std::int64_t tx = x0; tx <= x1; ++tx) {
        const TileAddress tile = TileAddress::Make(z, tx, ty);
        const GeoBounds b = TileBounds(tile);
        if (!(b.lon_min < fp.lon_max && b.lon_max > fp.lon_min &&
              b.lat_min < fp.lat_max && b.lat_max > fp.lat_min)) {
          continue;
        }
        std::vector<int> cols(tile_size);
        std::vector<int> rows(tile_size);
        for (int i = 0; i < tile_size; ++i) {
          const double lon =
              b.lon_min + (i + 0.5) / tile_size * (b.lon_max - b.lon_min);
          const double col = std::floor(geo.WorldToPixel(lon, geo.origin_lat()).col);
          cols[i] = (col >= 0 && col < width) ? static_cast<int>(col) : -1;
          const double lat = MercatorRowToLat(
              (static_cast<double>(ty) + (i + 0.5) / tile_size) / static_cast<double>(n));
          const double row = std::floor(geo.WorldToPixel(geo.origin_lon(), lat).row);
          rows[i] = (row >= 0 && row < height) ? static_cast<int>(row) : -1;
        }
        const bool any_col = std::any_of(cols.begin(), cols.end(), [](int c) { return c >= 0; });
        const bool any_row = std::any_of(rows.begin(), rows.end(), [](int r) { return r >= 0; });
        if (!any_col || !any_row) continue;
        render(tile, cols, rows);
      }
    }
  }
}

}  // namespace

TileAddress TileAddress::Make(int z, std::int64_t x, std::int64_t y) {
  CheckZoom(z);
  const std::int64_t n = std::int64_t{1} << z;
  if (x < 0 || y < 0 || x >= n || y >= n) {
    throw Error(ErrorCode::kRange, "tile " + std::to_string(z) + "/" +
                                       std::to_string(x) + "/" +
                                       std::to_string(y) + " out of range");
  }
  return {z, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
}

TileAddress LonLatToTile(double lon, double lat, int z) {
  CheckZoom(z);
  if (!(lon >= -180.0 && lon <= 180.0)) {
    throw Error(ErrorCode::kRange, "longitude " + std::to_string(lon) +
                                       " outside [-180, 180)");
  }
  if (!(std::abs(lat) <= kLatitudeInputLimit)) {
    throw Error(ErrorCode::kRange, "latitude " + std::to_string(lat) +
                                       " beyond the Web-Mercator limit");
  }
  const double n = std::ldexp(1.0, z);
  const double phi = DegToRad(lat);
  const double xf = (lon + 180.0) / 360.0 * n;
  const double yf =
      (1.0 - std::log(std::tan(phi) + 1.0 / std::cos(phi)) / kPi) / 2.0 * n;
  const auto max_index = static_cast<std::int64_t>(n) - 1;
  const auto x = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(xf)), 0, max_index);
  const auto y = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(yf)), 0, max_index);
  return TileAddress::Make(z, x, y);
}

GeoBounds TileBounds(const TileAddress& tile) {
  const double n = std::ldexp(1.0, tile.z);
  GeoBounds b;
  b.lon_min = tile.x / n * 360.0 - 180.0;
  b.lon_max = (tile.x + 1.0) / n * 360.0 - 180.0;
  b.lat_max = MercatorRowToLat(tile.y / n);
  b.lat_min = MercatorRowToLat((tile.y + 1.0) / n);
  return b;
}

std::vector<int> WindowStarts(int extent, int chip_size, int stride) {
  if (chip_size < 1 || stride < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chip size and stride must be >= 1");
  }
  if (stride > chip_size) {
    throw Error(ErrorCode::kInvalidArgument, "stride larger than chip size leaves gaps");
  }
  if (chip_size > extent) {
    throw Error(ErrorCode::kSize, "chip size " + std::to_string(chip_size) +
                                      " exceeds raster extent " +
                                      std::to_string(extent));
  }
  std::vector<int> starts;
  for (int p = 0; p + chip_size <= extent; p += stride) starts.push_back(p);
  if (starts.back() + chip_size < extent) starts.push_back(extent - chip_size);
  return starts;
}

std::vector<Chip> ChipRaster(const RgbImage& raster, const GeoTransform& geo,
                             int chip_size, int stride,
                             const select::CellGrid& grid,
                             std::string_view id_prefix) {
  const auto cols = WindowStarts(raster.width(), chip_size, stride);
  const auto rows = WindowStarts(raster.height(), chip_size, stride);
  std::vector<Chip> chips;
  chips.reserve(cols.size() * rows.size());
  for (int row : rows) {
    for (int col : cols) {
      Chip chip;
      chip.id = std::string(id_prefix) + "_" + std::to_string(col) + "_" +
                std::to_string(row);
      chip.rgb = raster.Crop(col, row, chip_size, chip_size);
      chip.offset = {col, row};
      chip.geo = geo.Offset(col, row);
      chip.cell_id = grid.CellIdFor(chip.Center());
      chips.push_back(std::move(chip));
    }
  }
  return chips;
}

Pyramid BuildPyramid(const LabelRaster& labels, ZoomRange zooms, int tile_size) {
  if (!labels.geo()) {
    throw Error(ErrorCode::kInvalidArgument, "label raster has no GeoTransform");
  }
  Pyramid pyramid;
  ForEachTile(*labels.geo(), labels.width(), labels.height(), zooms, tile_size,
              [&](const TileAddress& tile, const std::vector<int>& cols,
                  const std::vector<int>& rows) {
                LabelRaster out(tile_size, tile_size);
                for (int j = 0; j < tile_size; ++j) {
                  if (rows[j] < 0) continue;
                  for (int i = 0; i < tile_size; ++i) {
                    if (cols[i] < 0) continue;
                    out.set(i, j, ClassId(labels.at(cols[i], rows[j])));
                  }
                }
                pyramid.emplace(tile, EncodeLabelPng(out));
              });
  return pyramid;
}

Pyramid BuildImageryPyramid(const RgbImage& image, const GeoTransform& geo,
                            ZoomRange zooms, int tile_size) {
  Pyramid pyramid;
  ForEachTile(geo, image.width(), image.height(), zooms, tile_size,
              [&](const TileAddress& tile, const std::vector<int>& cols,
                  const std::vector<int>& rows) {
                RgbImage out(tile_size, tile_size);
                for (int j = 0; j < tile_size; ++j) {
                  if (rows[j] < 0) continue;
                  for (int i = 0; i < tile_size; ++i) {
                    if (cols[i] < 0) continue;
                    out.set(i, j, image.at(cols[i], rows[j]));
                  }
                }
                pyramid.emplace(tile, EncodeRgbPng(out));
              });
  return pyramid;
}

std::filesystem::path TilePath(const std::filesystem::path& root,
                               const TileAddress& tile) {
  return root / std::to_string(tile.z) / std::to_string(tile.x) /
         (std::to_string(tile.y) + ".png");
}

void WritePyramid(const std::filesystem::path& root, const Pyramid& pyramid) {
  for (const auto& [tile, bytes] : pyramid) {
    WriteFileBytes(TilePath(root, tile), bytes);
  }
}

RgbImage CompositeOverlay(const RgbImage& base, const RgbImage& overlay,
                          double opacity) {
  if (base.width() != overlay.width() || base.height() != overlay.height()) {
    throw Error(ErrorCode::kShape, "overlay size differs from base image");
  }
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    throw Error(ErrorCode::kRange, "opacity must lie in [0, 1]");
  }
  const auto b = base.data();
  const auto o = overlay.data();
  std::vector<std::uint8_t> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double v = (1.0 - opacity) * b[i] + opacity * o[i];
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return RgbImage(base.width(), base.height(), std::move(out));
}

}  // namespace landcover::tiles
