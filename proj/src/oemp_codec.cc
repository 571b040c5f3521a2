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

#include "landcover/oemp_codec.h"

#include <bit>
#include <cstring>
#include <string>

#include "landcover/error.h"

namespace landcover {

namespace {

constexpr char kMagic[4] = {'O', 'E', 'M', 'P'};

template <typename T>
void PutLe(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

template <typename T>
T GetLe(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<T>(bytes[offset + i]) << (8 * i));
  }
  return value;
}

}  // namespace

std::vector<std::uint8_t> EncodeProbRaster(const ProbRaster& raster) {
  if (raster.num_classes() > 255) {
    throw Error(ErrorCode::kSize, "OEMP stores at most 255 classes");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kOempHeaderSize + raster.data().size() * 4);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutLe<std::uint16_t>(out, kOempVersion);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(raster.width()));
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(raster.height()));
  out.push_back(static_cast<std::uint8_t>(raster.num_classes()));
  out.insert(out.end(), 3, 0);
  for (float v : raster.data()) {
    PutLe<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

ProbRaster DecodeProbRaster(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kOempHeaderSize ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kFormat, "OEMP magic mismatch");
  }
  const auto version = GetLe<std::uint16_t>(bytes, 4);
  if (version != kOempVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported OEMP version " + std::to_string(version));
  }
  const auto width = GetLe<std::uint32_t>(bytes, 6);
  const auto height = GetLe<std::uint32_t>(bytes, 10);
  const int k = bytes[14];
  const std::uint64_t expected_values =
      static_cast<std::uint64_t>(width) * height * k;
  const std::uint64_t payload = bytes.size() - kOempHeaderSize;
  if (k == 0 || payload != expected_values * 4) {
    throw Error(ErrorCode::kSize,
                "OEMP header declares " + std::to_string(width) + "x" +
                    std::to_string(height) + "x" + std::to_string(k) +
                    " but payload holds " + std::to_string(payload) + " bytes");
  }
  if (width > 1u << 30 || height > 1u << 30) {
    throw Error(ErrorCode::kSize, "OEMP dimensions too large");
  }
  std::vector<float> values(expected_values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(
        GetLe<std::uint32_t>(bytes, kOempHeaderSize + 4 * i));
  }
  return ProbRaster(static_cast<int>(width), static_cast<int>(height), k,
                    std::move(values), kDecodedProbabilityTolerance);
}

}  // namespace landcover
