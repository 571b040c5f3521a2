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

#include "landcover/refeval.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "landcover/error.h"

namespace landcover::refeval {

namespace {

using nlohmann::json;

// Mean Earth radius (IUGG).
constexpr double kEarthRadiusM = 6371008.8;
constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

Ring ParseRing(const json& coords) {
  if (!coords.is_array()) throw Error(ErrorCode::kParse, "ring is not an array");
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
        !pos[1].is_number()) {
      throw Error(ErrorCode::kParse, "malformed position in ring");
    }
    const LonLat p{pos[0].get<double>(), pos[1].get<double>()};
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) {
      throw Error(ErrorCode::kParse, "non-finite coordinate");
    }
    ring.push_back(p);
  }
  if (ring.size() < 4) {
    throw Error(ErrorCode::kParse, "ring has fewer than 4 positions");
  }
  if (ring.front().lon != ring.back().lon || ring.front().lat != ring.back().lat) {
    throw Error(ErrorCode::kParse, "ring is not closed");
  }
  return ring;
}

Polygon ParsePolygon(const json& coords) {
  if (!coords.is_array() || coords.empty()) {
    throw Error(ErrorCode::kParse, "polygon needs at least an outer ring");
  }
  Polygon polygon;
  polygon.outer = ParseRing(coords[0]);
  for (std::size_t i = 1; i < coords.size(); ++i) {
    polygon.holes.push_back(ParseRing(coords[i]));
  }
  return polygon;
}

void AddGeometry(const json& geometry, std::vector<Polygon>& out) {
  if (!geometry.is_object() || !geometry.contains("type")) {
    throw Error(ErrorCode::kParse, "geometry without a type");
  }
  const std::string type = geometry.at("type").get<std::string>();
  if (type == "Polygon") {
    out.push_back(ParsePolygon(geometry.at("coordinates")));
  } else if (type == "MultiPolygon") {
    for (const auto& part : geometry.at("coordinates")) {
      out.push_back(ParsePolygon(part));
    }
  } else {
    throw Error(ErrorCode::kUnsupportedGeometry,
                "unsupported geometry type " + type);
  }
}

double RingAreaSigned(const Ring& ring, double lat0_rad) {
  const double sx = kMetersPerDegree * std::cos(lat0_rad);
  const double sy = kMetersPerDegree;
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += (ring[i].lon * sx) * (ring[i + 1].lat * sy) -
             (ring[i + 1].lon * sx) * (ring[i].lat * sy);
  }
  return twice / 2.0;
}

struct Edge {
  double x0, y0, x1, y1;
};

// Zero area in pixel units, up to the noise of the world/pixel round trip.
// Vertices are taken relative to the first one.
bool IsDegenerate(const Ring& ring, const GeoTransform& geo) {
  const PixelCoord o = geo.WorldToPixel(ring[0].lon, ring[0].lat);
  double twice = 0.0;
  double extent = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const PixelCoord a = geo.WorldToPixel(ring[i].lon, ring[i].lat);
    const PixelCoord b = geo.WorldToPixel(ring[i + 1].lon, ring[i + 1].lat);
    twice += (a.col - o.col) * (b.row - o.row) - (b.col - o.col) * (a.row - o.row);
    extent = std::max({extent, std::abs(a.col - o.col), std::abs(a.row - o.row)});
  }
  return std::abs(twice) <= 1e-6 * std::max(extent * extent, 1e-6);
}

void AppendEdges(const Ring& ring, const GeoTransform& geo, std::vector<Edge>& edges) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const PixelCoord a = geo.WorldToPixel(ring[i].lon, ring[i].lat);
    const PixelCoord b = geo.WorldToPixel(ring[i + 1].lon, ring[i + 1].lat);
    if (a.row == b.row) continue;  // horizontal edges never cross a scanline
    edges.push_back({a.col, a.row, b.col, b.row});
  }
}

}  // namespace

std::string_view RoleName(FootprintRole role) {
  return role == FootprintRole::kBuilding ? "building" : "agriculture";
}

std::optional<FootprintRole> ParseRole(std::string_view text) {
  if (text == "building") return FootprintRole::kBuilding;
  if (text == "agriculture" || text == "agriculture land") {
    return FootprintRole::kAgriculture;
  }
  return std::nullopt;
}

ClassId RoleClass(FootprintRole role) {
  return ClassId(role == FootprintRole::kBuilding ? kBuilding : kAgricultureLand);
}

FootprintSet ParseFootprints(std::string_view geojson, FootprintRole role) {
  FootprintSet set;
  set.role = role;
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("footprint document: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("type")) {
      throw Error(ErrorCode::kParse, "document has no GeoJSON type");
    }
    const std::string type = doc.at("type").get<std::string>();
    if (type == "FeatureCollection") {
      for (const auto& feature : doc.at("features")) {
        AddGeometry(feature.at("geometry"), set.polygons);
      }
    } else if (type == "Feature") {
      AddGeometry(doc.at("geometry"), set.polygons);
    } else {
      AddGeometry(doc, set.polygons);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("footprint document: ") + e.what());
  }
  return set;
}

double PolygonAreaSqm(const Polygon& polygon) {
  const Ring& outer = polygon.outer;
  if (outer.size() < 2) return 0.0;
  double lat_sum = 0.0;
  for (std::size_t i = 0; i + 1 < outer.size(); ++i) lat_sum += outer[i].lat;
  const double lat0 =
      lat_sum / static_cast<double>(outer.size() - 1) * std::numbers::pi / 180.0;
  double area = std::abs(RingAreaSigned(outer, lat0));
  for (const auto& hole : polygon.holes) area -= std::abs(RingAreaSigned(hole, lat0));
  return std::max(area, 0.0);
}

FootprintSet FilterMinArea(const FootprintSet& footprints, double min_area_sqm) {
  if (!(min_area_sqm >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "minimum area must be >= 0");
  }
  FootprintSet out;
  out.role = footprints.role;
  for (const auto& polygon : footprints.polygons) {
    if (PolygonAreaSqm(polygon) >= min_area_sqm) out.polygons.push_back(polygon);
  }
  return out;
}

RasterizeResult RasterizePolygons(const FootprintSet& footprints,
                                  const GeoTransform& geo, int width, int height) {
  RasterizeResult result{BinaryMask(width, height), 0};
  std::vector<Edge> edges;
  std::vector<double> crossings;
  for (const auto& polygon : footprints.polygons) {
    if (IsDegenerate(polygon.outer, geo)) {
      ++result.degenerate_rings_skipped;
      continue;
    }
    edges.clear();
    AppendEdges(polygon.outer, geo, edges);
    for (const auto& hole : polygon.holes) {
      if (IsDegenerate(hole, geo)) {
        ++result.degenerate_rings_skipped;
        continue;
      }
      AppendEdges(hole, geo, edges);
    }
    double row_min = height;
    double row_max = 0.0;
    for (const auto& e : edges) {
      row_min = std::min({row_min, e.y0, e.y1});
      row_max = std::max({row_max, e.y0, e.y1});
    }
    const int first_row = std::max(
        0, static_cast<int>(std::floor(std::clamp(row_min - 0.5, -1.0, height + 1.0))));
    const int last_row = std::min(
        height - 1, static_cast<int>(std::ceil(std::clamp(row_max, -1.0, height + 1.0))));
    for (int row = first_row; row <= last_row; ++row) {
      const double y = row + 0.5;
      crossings.clear();
      for (const auto& e : edges) {
        // Half-open in y so a vertex on the scanline is counted once.
        if ((e.y0 > y) != (e.y1 > y)) {
          crossings.push_back((e.x1 - e.x0) * (y - e.y0) / (e.y1 - e.y0) + e.x0);
        }
      }
      std::sort(crossings.begin(), crossings.end());
      // Even-odd: centers in [x_{2i}, x_{2i+1}) are inside.
      for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
        const double lo = std::clamp(crossings[i] - 0.5, -1.0, width + 1.0);
        const double hi = std::clamp(crossings[i + 1] - 0.5, -1.0, width + 1.0);
        const int c0 = std::max(0, static_cast<int>(std::ceil(lo)));
        const int c1 = std::min(width - 1, static_cast<int>(std::ceil(hi)) - 1);
        for (int col = c0; col <= c1; ++col) result.mask.set(col, row, true);
      }
    }
  }
  return result;
}

BinaryEvaluation EvaluateBinary(const LabelRaster& predicted, ClassId target_class,
                                const BinaryMask& reference) {
  if (predicted.width() != reference.width() ||
      predicted.height() != reference.height()) {
    throw Error(ErrorCode::kShape, "prediction and reference mask differ in size");
  }
  std::vector<std::uint8_t> bits(predicted.size());
  const auto labels = predicted.data();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bits[i] = labels[i] == target_class.index() ? 1 : 0;
  }
  const BinaryMask predicted_mask(predicted.width(), predicted.height(), std::move(bits));
  BinaryEvaluation out;
  out.errors = metrics::ErrorMap(predicted_mask, reference);
  for (auto outcome : out.errors.outcomes) {
    switch (outcome) {
      case metrics::PixelOutcome::kTruePositive: ++out.true_positives; break;
      case metrics::PixelOutcome::kTrueNegative: ++out.true_negatives; break;
      case metrics::PixelOutcome::kFalsePositive: ++out.false_positives; break;
      case metrics::PixelOutcome::kFalseNegative: ++out.false_negatives; break;
    }
  }
  const std::uint64_t union_count =
      out.true_positives + out.false_positives + out.false_negatives;
  const std::uint64_t total = union_count + out.true_negatives;
  if (union_count > 0) {
    out.iou = static_cast<double>(out.true_positives) / static_cast<double>(union_count);
  }
  if (total > 0) {
    out.oa = static_cast<double>(out.true_positives + out.true_negatives) /
             static_cast<double>(total);
  }
  return out;
}

std::string BinaryEvaluationToJson(const BinaryEvaluation& evaluation,
                                   FootprintRole role) {
  auto optional = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json doc = {
      {"role", RoleName(role)},
      {"true_positives", evaluation.true_positives},
      {"true_negatives", evaluation.true_negatives},
      {"false_positives", evaluation.false_positives},
      {"false_negatives", evaluation.false_negatives},
      {"iou", optional(evaluation.iou)},
      {"oa", optional(evaluation.oa)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace landcover::refeval
