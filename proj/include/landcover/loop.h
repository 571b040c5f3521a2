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

#ifndef LANDCOVER_LOOP_H_
#define LANDCOVER_LOOP_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/manifest.h"
#include "landcover/model.h"
#include "landcover/select.h"
#include "landcover/synth.h"

namespace landcover::loop {

// Files inside a loop state directory.
inline constexpr char kLabeledManifest[] = "labeled.json";
inline constexpr char kUnlabeledManifest[] = "unlabeled.json";
inline constexpr char kTestManifest[] = "test.json";
inline constexpr char kAnnotationManifest[] = "annotations.json";
inline constexpr char kSelectionReport[] = "selection.json";
inline constexpr char kReportDir[] = "reports";
inline constexpr char kModelDir[] = "models";
inline constexpr char kReviewDir[] = "review";

struct LoopConfig {
  model::TrainConfig train{30, 0.05, 256, 0};
  int candidates_per_cell = select::kDefaultCandidatesPerCell;
  // 0 = one worker per hardware thread.
  int threads = 0;
};

struct IterationReport {
  // Number of annotation batches merged before this iteration's training.
  int iteration = 0;
  std::size_t train_chips = 0;
  double test_oa = 0.0;
  double test_miou = 0.0;
  std::size_t candidates_emitted = 0;
  // OA per generator tag over the test split (tags absent from the split are
  // omitted).
  std::map<std::string, double> test_oa_by_tag;
};

std::string IterationReportToJson(const IterationReport& report);
IterationReport IterationReportFromJson(std::string_view text);

// Splits the world's chips (seeded, 0.6/0.1/0.3 by default) and writes the
// labeled/unlabeled/test manifests: labeled = clean training chips,
// unlabeled = remaining training chips plus validation chips, test = test
// split with generator truth. Paths are rewritten relative to state_dir.
void InitStateFromWorld(const std::filesystem::path& world_root,
                        const std::filesystem::path& state_dir, std::uint64_t seed,
                        const select::SplitRatios& ratios = {});

// Merges annotations.json (if any) into the labeled set, trains, scores
// every unlabeled chip, writes selection.json plus the report and model for
// this iteration. Throws kMissingFile for missing manifests and
// kEmptyDataset when nothing is labeled.
IterationReport RunIteration(const std::filesystem::path& state_dir, const LoopConfig& config);

// Stand-in for human triage: replays selection.json through a decision log
// (review/iteration_<n>.ndjson, fixed timestamps), marking shifted chips as
// failures and everything else clean, then exports annotations.json and
// copies generator truth to each annotation's label_path. Returns the
// number of failures.
std::size_t ScriptedReview(const std::filesystem::path& state_dir,
                           const std::filesystem::path& world_root, int iteration);

// Runs `iterations` iterations; with a world root the scripted reviewer runs
// between consecutive iterations.
std::vector<IterationReport> RunLoop(const std::filesystem::path& state_dir,
                                     const LoopConfig& config, int iterations,
                                     const std::filesystem::path& scripted_world = {});

}  // namespace landcover::loop

#endif  // LANDCOVER_LOOP_H_
