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

#ifndef LANDCOVER_IO_H_
#define LANDCOVER_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace landcover {

// Throws Error(kMissingFile) naming the path when it does not exist.
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);

// Creates parent directories as needed.
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Resolves `path` against `base_dir` unless it is already absolute.
std::filesystem::path ResolvePath(const std::filesystem::path& base_dir,
                                  const std::filesystem::path& path);

}  // namespace landcover

#endif  // LANDCOVER_IO_H_
