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

#ifndef LANDCOVER_MANIFEST_H_
#define LANDCOVER_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landcover {

// One chip of a dataset split. Paths are relative to the manifest's
// directory unless absolute.
struct ChipRecord {
  std::string chip_id;
  std::string cell_id;
  std::string rgb_path;
  std::string label_path;  // empty for unlabeled chips
  std::string tag;         // generator tag when known ("clean"/"shifted")
  friend bool operator==(const ChipRecord&, const ChipRecord&) = default;
};

struct ChipManifest {
  // Number of annotation batches merged into this set so far.
  int merges = 0;
  std::vector<ChipRecord> chips;  // sorted by chip_id

  const ChipRecord* Find(std::string_view chip_id) const;
  friend bool operator==(const ChipManifest&, const ChipManifest&) = default;
};

std::string ChipManifestToJson(const ChipManifest& manifest);
// Throws kParse on malformed documents or duplicate chip ids.
ChipManifest ChipManifestFromJson(std::string_view text);
ChipManifest ReadChipManifest(const std::filesystem::path& path);
void WriteChipManifest(const std::filesystem::path& path, const ChipManifest& manifest);

// A failure chip handed to annotators; label_path is where the finished
// annotation is expected.
struct AnnotationRecord {
  std::string chip_id;
  std::string cell_id;
  std::string rgb_path;
  std::string label_path;
  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

std::string AnnotationManifestToJson(const std::vector<AnnotationRecord>& records);
std::vector<AnnotationRecord> AnnotationManifestFromJson(std::string_view text);
std::vector<AnnotationRecord> ReadAnnotationManifest(const std::filesystem::path& path);

}  // namespace landcover

#endif  // LANDCOVER_MANIFEST_H_
