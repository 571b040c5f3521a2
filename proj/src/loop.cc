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

#include "landcover/loop.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/metrics.h"
#include "landcover/png_codec.h"
#include "landcover/random.h"
#include "landcover/review_store.h"

namespace landcover::loop {

namespace fs = std::filesystem;

namespace {

// Runs fn(i) for i in [0, n) on a small pool; results must be written to
// per-index slots so scheduling never affects output.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

RgbImage LoadRgb(const fs::path& state_dir, const std::string& path) {
  return DecodeRgbPng(ReadFileBytes(ResolvePath(state_dir, path)));
}

LabelRaster LoadLabels(const fs::path& state_dir, const std::string& path) {
  return DecodeLabelPng(ReadFileBytes(ResolvePath(state_dir, path)));
}

std::string Relocate(const fs::path& from_dir, const std::string& path,
                     const fs::path& to_dir) {
  const fs::path absolute = ResolvePath(from_dir, path);
  return fs::proximate(absolute, to_dir).generic_string();
}

// Returns true when at least one new chip entered the labeled set.
bool MergeAnnotations(const fs::path& state_dir, ChipManifest& labeled,
                      ChipManifest& unlabeled) {
  const fs::path path = state_dir / kAnnotationManifest;
  if (!fs::exists(path)) return false;
  bool added = false;
  for (const auto& a : ReadAnnotationManifest(path)) {
    if (labeled.Find(a.chip_id)) continue;
    const fs::path label = ResolvePath(state_dir, a.label_path);
    if (!fs::exists(label)) {
      throw Error(ErrorCode::kMissingFile, "annotation not found: " + label.string());
    }
    ChipRecord record{a.chip_id, a.cell_id, a.rgb_path, a.label_path, ""};
    if (const ChipRecord* u = unlabeled.Find(a.chip_id)) record.tag = u->tag;
    labeled.chips.push_back(std::move(record));
    added = true;
  }
  if (!added) return false;
  std::sort(labeled.chips.begin(), labeled.chips.end(),
            [](const ChipRecord& a, const ChipRecord& b) { return a.chip_id < b.chip_id; });
  std::erase_if(unlabeled.chips,
                [&](const ChipRecord& r) { return labeled.Find(r.chip_id) != nullptr; });
  ++labeled.merges;
  return true;
}

}  // namespace

std::string IterationReportToJson(const IterationReport& report) {
  nlohmann::ordered_json j;
  j["iteration"] = report.iteration;
  j["train_chips"] = report.train_chips;
  j["test_oa"] = report.test_oa;
  j["test_miou"] = report.test_miou;
  j["candidates_emitted"] = report.candidates_emitted;
  j["test_oa_by_tag"] = nlohmann::ordered_json::object();
  for (const auto& [tag, oa] : report.test_oa_by_tag) j["test_oa_by_tag"][tag] = oa;
  return j.dump(2) + "\n";
}

IterationReport IterationReportFromJson(std::string_view text) {
  IterationReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.iteration = j.at("iteration").get<int>();
    r.train_chips = j.at("train_chips").get<std::size_t>();
    r.test_oa = j.at("test_oa").get<double>();
    r.test_miou = j.at("test_miou").get<double>();
    r.candidates_emitted = j.at("candidates_emitted").get<std::size_t>();
    if (j.contains("test_oa_by_tag")) {
      for (const auto& [tag, oa] : j.at("test_oa_by_tag").items()) {
        r.test_oa_by_tag[tag] = oa.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("iteration report: ") + e.what());
  }
  return r;
}

void InitStateFromWorld(const fs::path& world_root, const fs::path& state_dir,
                        std::uint64_t seed, const select::SplitRatios& ratios) {
  const auto world = synth::ReadWorldManifest(world_root / synth::kWorldManifestName);
  std::vector<std::string> ids;
  for (const auto& e : world) ids.push_back(e.chip_id);
  const auto splits = select::AssignSplits(ids, ratios, DeriveSeed(seed, "splits"));
  auto in = [](const std::vector<std::string>& sorted, const std::string& id) {
    return std::binary_search(sorted.begin(), sorted.end(), id);
  };
  fs::create_directories(state_dir);
  ChipManifest labeled, unlabeled, test;
  for (const auto& e : world) {
    ChipRecord record{e.chip_id, e.cell_id, Relocate(world_root, e.rgb_path, state_dir), "",
                      std::string(synth::TagName(e.tag))};
    const std::string truth = Relocate(world_root, e.truth_path, state_dir);
    if (in(splits.test, e.chip_id)) {
      record.label_path = truth;
      test.chips.push_back(std::move(record));
    } else if (in(splits.train, e.chip_id) && e.tag == synth::ChipTag::kClean) {
      record.label_path = truth;
      labeled.chips.push_back(std::move(record));
    } else {
      unlabeled.chips.push_back(std::move(record));
    }
  }
  for (auto* m : {&labeled, &unlabeled, &test}) {
    std::sort(m->chips.begin(), m->chips.end(),
              [](const ChipRecord& a, const ChipRecord& b) { return a.chip_id < b.chip_id; });
  }
  WriteChipManifest(state_dir / kLabeledManifest, labeled);
  WriteChipManifest(state_dir / kUnlabeledManifest, unlabeled);
  WriteChipManifest(state_dir / kTestManifest, test);
  fs::remove(state_dir / kAnnotationManifest);
}

IterationReport RunIteration(const fs::path& state_dir, const LoopConfig& config) {
  ChipManifest labeled = ReadChipManifest(state_dir / kLabeledManifest);
  ChipManifest unlabeled = ReadChipManifest(state_dir / kUnlabeledManifest);
  const ChipManifest test = ReadChipManifest(state_dir / kTestManifest);
  if (MergeAnnotations(state_dir, labeled, unlabeled)) {
    WriteChipManifest(state_dir / kLabeledManifest, labeled);
    WriteChipManifest(state_dir / kUnlabeledManifest, unlabeled);
  }
  if (labeled.chips.empty()) throw Error(ErrorCode::kEmptyDataset, "labeled set is empty");

  std::vector<model::LabeledImage> images(labeled.chips.size());
  ParallelFor(images.size(), config.threads, [&](std::size_t i) {
    const auto& c = labeled.chips[i];
    images[i] = {LoadRgb(state_dir, c.rgb_path), LoadLabels(state_dir, c.label_path)};
  });
  const model::ClassifierParams params = model::TrainClassifier(images, config.train);
  images.clear();

  std::vector<select::Candidate> scored(unlabeled.chips.size());
  ParallelFor(scored.size(), config.threads, [&](std::size_t i) {
    const auto& c = unlabeled.chips[i];
    const ProbRaster probs = model::PredictProbs(params, LoadRgb(state_dir, c.rgb_path));
    select::Candidate& candidate = scored[i];
    candidate.chip_id = c.chip_id;
    candidate.cell_id = c.cell_id;
    candidate.entropy = select::ChipEntropy(probs);
    candidate.rgb_path = c.rgb_path;
  });
  const auto selected = select::StratifiedTopK(std::move(scored), config.candidates_per_cell);
  WriteTextFile(state_dir / kSelectionReport, select::SelectionReportToJson(selected));

  std::vector<metrics::ConfusionMatrix> per_chip(test.chips.size(),
                                                 metrics::ConfusionMatrix(kNumClasses));
  ParallelFor(test.chips.size(), config.threads, [&](std::size_t i) {
    const auto& c = test.chips[i];
    const LabelRaster pred =
        model::ArgmaxLabels(model::PredictProbs(params, LoadRgb(state_dir, c.rgb_path)));
    per_chip[i] = metrics::AccumulateConfusion(pred, LoadLabels(state_dir, c.label_path));
  });
  metrics::ConfusionMatrix overall(kNumClasses);
  std::map<std::string, metrics::ConfusionMatrix> by_tag;
  for (std::size_t i = 0; i < per_chip.size(); ++i) {
    overall = metrics::MergeConfusion(overall, per_chip[i]);
    const std::string& tag = test.chips[i].tag;
    if (tag.empty()) continue;
    auto it = by_tag.try_emplace(tag, kNumClasses).first;
    it->second = metrics::MergeConfusion(it->second, per_chip[i]);
  }

  IterationReport report;
  report.iteration = labeled.merges;
  report.train_chips = labeled.chips.size();
  report.candidates_emitted = selected.size();
  if (overall.Total() > 0) {
    const auto m = metrics::ComputeMetrics(overall);
    report.test_oa = m.oa.value_or(0.0);
    report.test_miou = m.miou.value_or(0.0);
  }
  for (const auto& [tag, cm] : by_tag) {
    if (cm.Total() > 0) report.test_oa_by_tag[tag] = metrics::ComputeMetrics(cm).oa.value_or(0.0);
  }
  const std::string stem = "iteration_" + std::to_string(report.iteration);
  model::SaveParams(state_dir / kModelDir / (stem + ".json"), params);
  WriteTextFile(state_dir / kReportDir / (stem + ".json"), IterationReportToJson(report));
  return report;
}

std::size_t ScriptedReview(const fs::path& state_dir, const fs::path& world_root,
                           int iteration) {
  const auto world = synth::ReadWorldManifest(world_root / synth::kWorldManifestName);
  std::map<std::string, const synth::WorldManifestEntry*> truth;
  for (const auto& e : world) truth[e.chip_id] = &e;

  auto candidates =
      select::SelectionReportFromJson(ReadTextFile(state_dir / kSelectionReport));
  const fs::path log = state_dir / kReviewDir /
                       ("iteration_" + std::to_string(iteration) + ".ndjson");
  fs::remove(log);
  service::ReviewStore store(candidates, log, [] { return std::int64_t{0}; });
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.chip_id < b.chip_id; });
  for (const auto& c : candidates) {
    const auto it = truth.find(c.chip_id);
    if (it == truth.end()) {
      throw Error(ErrorCode::kNotFound, "chip " + c.chip_id + " is not in the world");
    }
    const bool shifted = it->second->tag == synth::ChipTag::kShifted;
    store.Record(c.chip_id, shifted ? select::Decision::kFailure : select::Decision::kClean,
                 "scripted");
  }
  const auto records = store.AnnotationRecords();
  for (const auto& r : records) {
    const auto* entry = truth.at(r.chip_id);
    WriteFileBytes(ResolvePath(state_dir, r.label_path),
                   ReadFileBytes(world_root / entry->truth_path));
  }
  WriteTextFile(state_dir / kAnnotationManifest, AnnotationManifestToJson(records));
  return records.size();
}

std::vector<IterationReport> RunLoop(const fs::path& state_dir, const LoopConfig& config,
                                     int iterations, const fs::path& scripted_world) {
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  std::vector<IterationReport> reports;
  for (int i = 0; i < iterations; ++i) {
    reports.push_back(RunIteration(state_dir, config));
    if (!scripted_world.empty() && i + 1 < iterations) {
      ScriptedReview(state_dir, scripted_world, reports.back().iteration);
    }
  }
  return reports;
}

}  // namespace landcover::loop
