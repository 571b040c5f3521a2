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

#include "landcover/png_codec.h"

#include <png.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <string>

#include "landcover/error.h"

namespace landcover {

namespace {

constexpr int kCompressionLevel = 6;

struct CodecState {
  std::span<const std::uint8_t> input;
  std::size_t position = 0;
  std::vector<std::uint8_t>* output = nullptr;
  char message[256] = {};
};

void OnError(png_structp png, png_const_charp message) {
  auto* state = static_cast<CodecState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", message);
  png_longjmp(png, 1);
}

void OnWarning(png_structp, png_const_charp) {}

void ReadBytes(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<CodecState*>(png_get_io_ptr(png));
  if (state->position + count > state->input.size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, state->input.data() + state->position, count);
  state->position += count;
}

void WriteBytes(png_structp png, png_bytep data, png_size_t count) {
  auto* state = static_cast<CodecState*>(png_get_io_ptr(png));
  state->output->insert(state->output->end(), data, data + count);
}

void FlushBytes(png_structp) {}

struct EncodeRequest {
  int width = 0;
  int height = 0;
  int color_type = PNG_COLOR_TYPE_RGB;
  int channels = 3;
  const std::uint8_t* pixels = nullptr;
  std::span<const Rgb> palette;
};

std::vector<std::uint8_t> Encode(const EncodeRequest& request) {
  if (request.width <= 0 || request.height <= 0) {
    throw Error(ErrorCode::kSize, "cannot encode an empty image");
  }
  std::vector<std::uint8_t> out;
  CodecState state;
  state.output = &out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            OnError, OnWarning);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kFormat, std::string("PNG encode: ") + state.message);
  }
  png_set_write_fn(png, &state, WriteBytes, FlushBytes);
  png_set_compression_level(png, kCompressionLevel);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, request.width, request.height, 8, request.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  std::array<png_color, 256> entries{};
  if (request.color_type == PNG_COLOR_TYPE_PALETTE) {
    for (std::size_t i = 0; i < request.palette.size(); ++i) {
      entries[i] = {request.palette[i].r, request.palette[i].g,
                    request.palette[i].b};
    }
    png_set_PLTE(png, info, entries.data(),
                 static_cast<int>(request.palette.size()));
  }
  png_write_info(png, info);
  const std::size_t stride =
      static_cast<std::size_t>(request.width) * request.channels;
  for (int row = 0; row < request.height; ++row) {
    png_write_row(png, const_cast<png_bytep>(request.pixels + row * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int color_type = 0;
  int channels = 0;
  std::vector<Rgb> palette;
  std::vector<std::uint8_t> pixels;
};

enum class DecodeMode { kIndexed, kRgb };

// All state mutated after setjmp lives behind pointers, so nothing is left
// indeterminate when libpng longjmps back here.
bool DecodeInto(CodecState* state, DecodedPng* out, DecodeMode mode) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state,
                                           OnError, OnWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, state, ReadBytes);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  if (mode == DecodeMode::kIndexed) {
    if (color_type != PNG_COLOR_TYPE_PALETTE) {
      png_error(png, "label PNG must be palette-indexed");
    }
    png_colorp entries = nullptr;
    int count = 0;
    if (png_get_PLTE(png, info, &entries, &count) == 0) {
      png_error(png, "indexed PNG without a palette");
    }
    for (int i = 0; i < count; ++i) {
      out->palette.push_back({entries[i].red, entries[i].green, entries[i].blue});
    }
    if (bit_depth < 8) png_set_packing(png);
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
      if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    }
    if (bit_depth == 16) png_set_strip_16(png);
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);
  out->width = static_cast<int>(png_get_image_width(png, info));
  out->height = static_cast<int>(png_get_image_height(png, info));
  out->color_type = color_type;
  out->channels = png_get_channels(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out->pixels.resize(row_bytes * out->height);
  for (int row = 0; row < out->height; ++row) {
    png_read_row(png, out->pixels.data() + row * row_bytes, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

DecodedPng Decode(std::span<const std::uint8_t> bytes, DecodeMode mode) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kFormat, "input is not a PNG stream");
  }
  CodecState state;
  state.input = bytes;
  DecodedPng decoded;
  if (!DecodeInto(&state, &decoded, mode)) {
    throw Error(ErrorCode::kFormat, std::string("PNG decode: ") + state.message);
  }
  return decoded;
}

std::string ColorText(Rgb c) {
  return "(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
         std::to_string(c.b) + ")";
}

}  // namespace

std::vector<std::uint8_t> EncodeLabelPng(const LabelRaster& raster) {
  for (std::uint8_t v : raster.data()) {
    if (v > kNumClasses) {
      throw Error(ErrorCode::kInvalidClass,
                  "class index " + std::to_string(v) + " has no palette entry");
    }
  }
  EncodeRequest request;
  request.width = raster.width();
  request.height = raster.height();
  request.color_type = PNG_COLOR_TYPE_PALETTE;
  request.channels = 1;
  request.pixels = raster.data().data();
  request.palette = Palette();
  return Encode(request);
}

LabelRaster DecodeLabelPng(std::span<const std::uint8_t> bytes) {
  DecodedPng decoded = Decode(bytes, DecodeMode::kIndexed);
  std::vector<std::uint8_t> to_class(decoded.palette.size());
  for (std::size_t i = 0; i < decoded.palette.size(); ++i) {
    const auto id = ClassFromColor(decoded.palette[i]);
    if (!id) {
      throw Error(ErrorCode::kPalette,
                  "palette entry " + std::to_string(i) + " has color " +
                      ColorText(decoded.palette[i]) +
                      " outside the label palette");
    }
    to_class[i] = id->index();
  }
  for (auto& v : decoded.pixels) {
    if (v >= to_class.size()) {
      throw Error(ErrorCode::kFormat, "pixel index " + std::to_string(v) +
                                          " beyond palette size");
    }
    v = to_class[v];
  }
  return LabelRaster(decoded.width, decoded.height, std::move(decoded.pixels));
}

std::vector<std::uint8_t> EncodeRgbPng(const RgbImage& image) {
  EncodeRequest request;
  request.width = image.width();
  request.height = image.height();
  request.color_type = PNG_COLOR_TYPE_RGB;
  request.channels = 3;
  request.pixels = image.data().data();
  return Encode(request);
}

RgbImage DecodeRgbPng(std::span<const std::uint8_t> bytes) {
  DecodedPng decoded = Decode(bytes, DecodeMode::kRgb);
  if (decoded.channels != 3) {
    throw Error(ErrorCode::kFormat, "unexpected channel count " +
                                        std::to_string(decoded.channels));
  }
  return RgbImage(decoded.width, decoded.height, std::move(decoded.pixels));
}

std::vector<std::uint8_t> EncodeTransparentPng(int width, int height) {
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 4, 0);
  EncodeRequest request;
  request.width = width;
  request.height = height;
  request.color_type = PNG_COLOR_TYPE_RGB_ALPHA;
  request.channels = 4;
  request.pixels = pixels.data();
  return Encode(request);
}

RgbImage RenderLabels(const LabelRaster& raster) {
  RgbImage out(raster.width(), raster.height());
  for (int row = 0; row < raster.height(); ++row) {
    for (int col = 0; col < raster.width(); ++col) {
      out.set(col, row, Palette()[raster.at(col, row)]);
    }
  }
  return out;
}

}  // namespace landcover
