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

#ifndef LANDCOVER_REFEVAL_H_
#define LANDCOVER_REFEVAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/classes.h"
#include "landcover/metrics.h"
#include "landcover/raster.h"

namespace landcover::refeval {

// Closed ring: first vertex == last vertex, at least 4 vertices.
using Ring = std::vector<LonLat>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

enum class FootprintRole { kBuilding, kAgriculture };

std::string_view RoleName(FootprintRole role);
std::optional<FootprintRole> ParseRole(std::string_view text);
// The label class a footprint role is compared against.
ClassId RoleClass(FootprintRole role);

struct FootprintSet {
  std::vector<Polygon> polygons;
  FootprintRole role = FootprintRole::kBuilding;
};

// Minimum footprint areas used for the reference data (square meters).
inline constexpr double kDefaultMinAreaSqm = 200.0;
inline constexpr double kHokkaidoMinAreaSqm = 400.0;

// Reads a GeoJSON FeatureCollection, Feature or bare geometry holding
// Polygon/MultiPolygon geometries in WGS84 lon/lat. Throws kParse for
// malformed documents or rings, kUnsupportedGeometry naming the type.
FootprintSet ParseFootprints(std::string_view geojson, FootprintRole role);

// Planar area in square meters: shoelace on a local equirectangular
// projection centered at the outer ring's mean latitude, holes subtracted.
double PolygonAreaSqm(const Polygon& polygon);

// Drops polygons whose area is below min_area_sqm.
FootprintSet FilterMinArea(const FootprintSet& footprints, double min_area_sqm);

struct RasterizeResult {
  BinaryMask mask;
  int degenerate_rings_skipped = 0;
};

// Scanline fill: a pixel is set iff its center lies inside an outer ring and
// outside that polygon's holes (even-odd rule). Zero-area rings are skipped
// and counted.
RasterizeResult RasterizePolygons(const FootprintSet& footprints,
                                  const GeoTransform& geo, int width, int height);

struct BinaryEvaluation {
  std::uint64_t true_positives = 0;
  std::uint64_t true_negatives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::optional<double> iou;
  std::optional<double> oa;
  metrics::ErrorRaster errors;
};

// Compares (predicted == target_class) against the reference mask.
// Throws kShape on size mismatch.
BinaryEvaluation EvaluateBinary(const LabelRaster& predicted, ClassId target_class,
                                const BinaryMask& reference);

std::string BinaryEvaluationToJson(const BinaryEvaluation& evaluation,
                                   FootprintRole role);

}  // namespace landcover::refeval

#endif  // LANDCOVER_REFEVAL_H_
