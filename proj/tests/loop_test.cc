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

#include <gtest/gtest.h>

#include <set>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/loop.h"
#include "landcover/manifest.h"
#include "landcover/synth.h"
#include "scratch.h"

namespace landcover::loop {
namespace {

namespace fs = std::filesystem;
using testing_oracles::ScratchDir;
using testing_oracles::Slurp;

void MakeWorld(const fs::path& root, int cells, int chips, std::uint64_t seed) {
  synth::WorldConfig cfg;
  cfg.n_cells = cells;
  cfg.chips_per_cell = chips;
  cfg.shift_fraction = 0.5;
  cfg.seed = seed;
  synth::WriteWorld(synth::GenerateWorld(cfg), root);
}

std::set<std::string> LabeledIds(const fs::path& state) {
  std::set<std::string> ids;
  for (const auto& c : ReadChipManifest(state / kLabeledManifest).chips) ids.insert(c.chip_id);
  return ids;
}

LoopConfig Fast() {
  LoopConfig cfg;
  cfg.train.epochs = 8;
  return cfg;
}

TEST(LoopTest, InitSplitsByTag) {
  ScratchDir dir("loop_init");
  MakeWorld(dir / "world", 4, 4, 3);
  InitStateFromWorld(dir / "world", dir / "state", 3);
  const auto labeled = ReadChipManifest(dir / "state" / kLabeledManifest);
  const auto unlabeled = ReadChipManifest(dir / "state" / kUnlabeledManifest);
  const auto test = ReadChipManifest(dir / "state" / kTestManifest);
  EXPECT_EQ(labeled.chips.size() + unlabeled.chips.size() + test.chips.size(), 16u);
  for (const auto& c : labeled.chips) {
    EXPECT_EQ(c.tag, "clean");
    EXPECT_FALSE(c.label_path.empty());
    EXPECT_TRUE(fs::exists(dir / "state" / c.label_path));
  }
  for (const auto& c : unlabeled.chips) EXPECT_TRUE(c.label_path.empty());
  for (const auto& c : test.chips) EXPECT_FALSE(c.label_path.empty());
}

TEST(LoopTest, IterationWritesReportsAndIsIdempotent) {
  ScratchDir dir("loop_idem");
  MakeWorld(dir / "world", 4, 4, 5);
  const auto state = dir / "state";
  InitStateFromWorld(dir / "world", state, 5);
  const auto first = RunIteration(state, Fast());
  EXPECT_EQ(first.iteration, 0);
  EXPECT_EQ(first.train_chips, LabeledIds(state).size());
  EXPECT_GT(first.candidates_emitted, 0u);
  EXPECT_GT(first.test_oa, 0.0);
  const auto report = state / kReportDir / "iteration_0.json";
  const auto model = state / kModelDir / "iteration_0.json";
  ASSERT_TRUE(fs::exists(report));
  ASSERT_TRUE(fs::exists(model));
  const std::string report_bytes = Slurp(report);
  const std::string model_bytes = Slurp(model);
  const std::string selection_bytes = Slurp(state / kSelectionReport);
  EXPECT_EQ(IterationReportToJson(IterationReportFromJson(report_bytes)), report_bytes);
  const auto selection = select::SelectionReportFromJson(selection_bytes);
  EXPECT_EQ(selection.size(), first.candidates_emitted);

  RunIteration(state, Fast());
  EXPECT_EQ(Slurp(report), report_bytes);
  EXPECT_EQ(Slurp(model), model_bytes);
  EXPECT_EQ(Slurp(state / kSelectionReport), selection_bytes);
}

TEST(LoopTest, ReviewMergesAndLabeledSetGrows) {
  ScratchDir dir("loop_grow");
  MakeWorld(dir / "world", 4, 4, 6);
  const auto state = dir / "state";
  InitStateFromWorld(dir / "world", state, 6);
  const auto before = LabeledIds(state);
  RunIteration(state, Fast());
  const std::size_t failures = ScriptedReview(state, dir / "world", 0);
  ASSERT_TRUE(fs::exists(state / kAnnotationManifest));
  const auto annotations = ReadAnnotationManifest(state / kAnnotationManifest);
  EXPECT_EQ(annotations.size(), failures);
  for (const auto& a : annotations) EXPECT_TRUE(fs::exists(state / a.label_path)) << a.label_path;
  const auto second = RunIteration(state, Fast());
  const auto after = LabeledIds(state);
  for (const auto& id : before) EXPECT_TRUE(after.count(id)) << id;
  EXPECT_EQ(after.size(), before.size() + failures);
  EXPECT_EQ(second.iteration, failures > 0 ? 1 : 0);
  // merged chips leave the unlabeled pool
  for (const auto& c : ReadChipManifest(state / kUnlabeledManifest).chips) EXPECT_FALSE(after.count(c.chip_id));
}

TEST(LoopTest, ClosedLoopImprovesShiftedChips) {
  ScratchDir dir("loop_closed");
  MakeWorld(dir / "world", 8, 8, 1);
  InitStateFromWorld(dir / "world", dir / "state", 1);
  const auto reports = RunLoop(dir / "state", LoopConfig{}, 2, dir / "world");
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].iteration, 0);
  EXPECT_EQ(reports[1].iteration, 1);
  EXPECT_GT(reports[1].train_chips, reports[0].train_chips);
  EXPECT_GE(reports[1].test_oa_by_tag.at("shifted") - reports[0].test_oa_by_tag.at("shifted"), 0.10);
  EXPECT_GE(reports[1].test_oa - reports[0].test_oa, 0.05);
}

TEST(LoopTest, Errors) {
  ScratchDir dir("loop_err");
  try {
    RunIteration(dir.path(), Fast());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
  MakeWorld(dir / "world", 2, 2, 2);
  const auto state = dir / "state";
  InitStateFromWorld(dir / "world", state, 2);
  ChipManifest empty;
  WriteChipManifest(state / kLabeledManifest, empty);
  try {
    RunIteration(state, Fast());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  WriteTextFile(state / kAnnotationManifest,
                R"({"annotations":[{"chip_id":"x","cell_id":"c","rgb_path":"rgb/x.png","label_path":"annotations/x.png"}]})");
  try {
    RunIteration(state, Fast());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
}

}  // namespace
}  // namespace landcover::loop
