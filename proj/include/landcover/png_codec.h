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

#ifndef LANDCOVER_PNG_CODEC_H_
#define LANDCOVER_PNG_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "landcover/raster.h"

namespace landcover {

// 8-bit indexed PNG whose PLTE chunk is the normative palette; the stored
// pixel index is the class index. Encoder settings are fixed so identical
// rasters always produce identical bytes.
std::vector<std::uint8_t> EncodeLabelPng(const LabelRaster& raster);

// Accepts any palette-type PNG whose palette entries are all normative
// colors (entries may be reordered). Throws kFormat for non-PNG or truncated
// input and kPalette naming the first non-normative color.
LabelRaster DecodeLabelPng(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> EncodeRgbPng(const RgbImage& image);

// Decodes gray, palette, RGB and RGBA PNGs into RGB (alpha dropped).
RgbImage DecodeRgbPng(std::span<const std::uint8_t> bytes);

// Fully transparent RGBA tile.
std::vector<std::uint8_t> EncodeTransparentPng(int width, int height);

// Renders class indices through the palette.
RgbImage RenderLabels(const LabelRaster& raster);

}  // namespace landcover

#endif  // LANDCOVER_PNG_CODEC_H_
