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

#include "landcover/manifest.h"

#include <algorithm>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"

namespace landcover {

namespace {

using nlohmann::json;

std::string OptionalString(const json& item, const char* key) {
  const auto it = item.find(key);
  return it == item.end() ? std::string() : it->get<std::string>();
}

}  // namespace

const ChipRecord* ChipManifest::Find(std::string_view chip_id) const {
  const auto it = std::lower_bound(
      chips.begin(), chips.end(), chip_id,
      [](const ChipRecord& r, std::string_view id) { return r.chip_id < id; });
  return it != chips.end() && it->chip_id == chip_id ? &*it : nullptr;
}

std::string ChipManifestToJson(const ChipManifest& manifest) {
  json chips = json::array();
  for (const auto& c : manifest.chips) {
    json item = {{"chip_id", c.chip_id}, {"cell_id", c.cell_id}, {"rgb_path", c.rgb_path}};
    if (!c.label_path.empty()) item["label_path"] = c.label_path;
    if (!c.tag.empty()) item["tag"] = c.tag;
    chips.push_back(std::move(item));
  }
  return json{{"merges", manifest.merges}, {"chips", chips}}.dump(2) + "\n";
}

ChipManifest ChipManifestFromJson(std::string_view text) {
  ChipManifest manifest;
  try {
    const auto doc = json::parse(text);
    manifest.merges = doc.value("merges", 0);
    for (const auto& item : doc.at("chips")) {
      manifest.chips.push_back({item.at("chip_id").get<std::string>(),
                                item.at("cell_id").get<std::string>(),
                                item.at("rgb_path").get<std::string>(),
                                OptionalString(item, "label_path"),
                                OptionalString(item, "tag")});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("chip manifest: ") + e.what());
  }
  std::sort(manifest.chips.begin(), manifest.chips.end(),
            [](const ChipRecord& a, const ChipRecord& b) { return a.chip_id < b.chip_id; });
  for (std::size_t i = 1; i < manifest.chips.size(); ++i) {
    if (manifest.chips[i].chip_id == manifest.chips[i - 1].chip_id) {
      throw Error(ErrorCode::kParse, "duplicate chip id " + manifest.chips[i].chip_id);
    }
  }
  return manifest;
}

ChipManifest ReadChipManifest(const std::filesystem::path& path) {
  return ChipManifestFromJson(ReadTextFile(path));
}

void WriteChipManifest(const std::filesystem::path& path, const ChipManifest& manifest) {
  WriteTextFile(path, ChipManifestToJson(manifest));
}

std::string AnnotationManifestToJson(const std::vector<AnnotationRecord>& records) {
  json items = json::array();
  for (const auto& r : records) {
    items.push_back({{"chip_id", r.chip_id},
                     {"cell_id", r.cell_id},
                     {"rgb_path", r.rgb_path},
                     {"label_path", r.label_path}});
  }
  return json{{"annotations", items}}.dump(2) + "\n";
}

std::vector<AnnotationRecord> AnnotationManifestFromJson(std::string_view text) {
  std::vector<AnnotationRecord> records;
  try {
    const auto doc = json::parse(text);
    for (const auto& item : doc.at("annotations")) {
      records.push_back({item.at("chip_id").get<std::string>(),
                         item.at("cell_id").get<std::string>(),
                         item.at("rgb_path").get<std::string>(),
                         item.at("label_path").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("annotation manifest: ") + e.what());
  }
  return records;
}

std::vector<AnnotationRecord> ReadAnnotationManifest(const std::filesystem::path& path) {
  return AnnotationManifestFromJson(ReadTextFile(path));
}

}  // namespace landcover
