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

#ifndef LANDCOVER_OEMP_CODEC_H_
#define LANDCOVER_OEMP_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "landcover/raster.h"

namespace landcover {

// OEMP probability-raster interchange format, all fields little-endian:
//   bytes 0..3   magic "OEMP"
//   bytes 4..5   u16 version (1)
//   bytes 6..9   u32 width
//   bytes 10..13 u32 height
//   byte  14     u8  k
//   bytes 15..17 reserved, zero
//   then k planes of width*height float32, row-major.
inline constexpr std::uint16_t kOempVersion = 1;
inline constexpr std::size_t kOempHeaderSize = 18;

std::vector<std::uint8_t> EncodeProbRaster(const ProbRaster& raster);

// Throws kFormat on magic/version mismatch, kSize when the payload does not
// match the header dimensions, kNormalization when a pixel's probabilities
// sum outside 1 +/- 1e-3.
ProbRaster DecodeProbRaster(std::span<const std::uint8_t> bytes);

}  // namespace landcover

#endif  // LANDCOVER_OEMP_CODEC_H_
