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

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the code under test except for plain data
// types.

#ifndef LANDCOVER_TESTS_ORACLES_H_
#define LANDCOVER_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "landcover/classes.h"
#include "landcover/random.h"
#include "landcover/raster.h"

namespace landcover::testing_oracles {

// Random (pred, truth) pair: `agreement` is the chance pred copies truth,
// `ignore` the chance a truth pixel is 0. Predictions may also be 0.
inline std::pair<LabelRaster, LabelRaster> RandomLabelPair(Rng& rng, int w, int h,
                                                           double agreement, double ignore) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> pred(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = rng.UniformDouble() < ignore
                   ? 0
                   : static_cast<std::uint8_t>(1 + rng.UniformInt(kNumClasses));
    pred[i] = rng.UniformDouble() < agreement
                  ? truth[i]
                  : static_cast<std::uint8_t>(rng.UniformInt(kNumClasses + 1));
  }
  return {LabelRaster(w, h, pred), LabelRaster(w, h, truth)};
}

struct PixelCounts {
  std::array<std::uint64_t, kNumClasses + 1> tp{}, fn{}, fp{};
  std::uint64_t correct = 0;
  std::uint64_t counted = 0;
};

// One pass over pixel pairs; truth 0 is ignored, predicted 0 is an error.
inline PixelCounts BruteForceCounts(const LabelRaster& pred, const LabelRaster& truth) {
  PixelCounts out;
  for (int r = 0; r < truth.height(); ++r) {
    for (int c = 0; c < truth.width(); ++c) {
      const int t = truth.at(c, r);
      const int p = pred.at(c, r);
      if (t == 0) continue;
      ++out.counted;
      if (t == p) {
        ++out.correct;
        ++out.tp[t];
      } else {
        ++out.fn[t];
        if (p != 0) ++out.fp[p];
      }
    }
  }
  return out;
}

// Slippy-map tile index via the inverse-hyperbolic form of the Mercator y.
inline std::pair<long long, long long> SlippyTile(double lon, double lat, int z) {
  const double n = std::ldexp(1.0, z);
  const double phi = lat * M_PI / 180.0;
  const long long x = static_cast<long long>(std::floor((lon + 180.0) / 360.0 * n));
  const long long y =
      static_cast<long long>(std::floor((1.0 - std::asinh(std::tan(phi)) / M_PI) / 2.0 * n));
  const long long max = static_cast<long long>(n) - 1;
  return {std::clamp(x, 0LL, max), std::clamp(y, 0LL, max)};
}

inline double SlippyTileNorthLat(long long y, int z) {
  const double n = std::ldexp(1.0, z);
  return std::atan(std::sinh(M_PI * (1.0 - 2.0 * static_cast<double>(y) / n))) * 180.0 / M_PI;
}

// Even-odd point-in-polygon (W. R. Franklin's PNPOLY).
inline bool Pnpoly(const std::vector<LonLat>& ring, double x, double y) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = ring[i].lon, yi = ring[i].lat;
    const double xj = ring[j].lon, yj = ring[j].lat;
    if (((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi)) {
      inside = !inside;
    }
  }
  return inside;
}

// Random star-shaped (hence simple) closed ring around (cx, cy).
inline std::vector<LonLat> StarPolygon(Rng& rng, double cx, double cy, double r_min,
                                       double r_max, int vertices) {
  std::vector<double> angles(vertices);
  for (auto& a : angles) a = rng.Uniform(0.0, 2.0 * M_PI);
  std::sort(angles.begin(), angles.end());
  std::vector<LonLat> ring;
  for (double a : angles) {
    const double r = rng.Uniform(r_min, r_max);
    ring.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  ring.push_back(ring.front());
  return ring;
}

}  // namespace landcover::testing_oracles

#endif  // LANDCOVER_TESTS_ORACLES_H_
