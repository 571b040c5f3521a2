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

#ifndef LANDCOVER_REVIEW_STORE_H_
#define LANDCOVER_REVIEW_STORE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/manifest.h"
#include "landcover/select.h"

namespace landcover::service {

// UTC seconds.
using Clock = std::function<std::int64_t()>;
std::int64_t SystemClockSeconds();

struct DecisionRecord {
  std::int64_t revision = 0;
  std::string candidate_id;
  select::Decision decision = select::Decision::kFailure;
  std::string annotator;
  std::int64_t timestamp = 0;
  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

// One compact JSON object per line, keys in a fixed order.
std::string DecisionRecordToLine(const DecisionRecord& record);
DecisionRecord DecisionRecordFromLine(std::string_view line);

struct CandidateFilter {
  std::optional<select::Decision> state;
  std::optional<std::string> cell;
};

struct CandidatePage {
  std::size_t total = 0;  // matches before paging
  std::vector<select::Candidate> items;
};

inline constexpr char kAnnotationDir[] = "annotations";

// Candidate queue plus the decision log. Reads take a shared lock, writes
// are serialized and appended (and flushed) before they are acknowledged.
class ReviewStore {
 public:
  // Replays log_path when it exists; an empty path keeps the log in memory
  // only. Throws kParse for corrupt logs or records naming unknown
  // candidates, kInvalidArgument for duplicate candidate ids.
  ReviewStore(std::vector<select::Candidate> candidates,
              std::filesystem::path log_path = {}, Clock clock = SystemClockSeconds);

  // Descending entropy, ties by ascending chip_id; filters are conjunctive.
  CandidatePage List(const CandidateFilter& filter, std::size_t offset,
                     std::size_t limit) const;

  // Throws kNotFound for unknown candidates and kInvalidArgument for
  // decisions other than failure/clean or an empty annotator.
  DecisionRecord Record(std::string_view candidate_id, select::Decision decision,
                        std::string_view annotator);

  std::optional<select::Candidate> Get(std::string_view candidate_id) const;
  // Every candidate with its latest decision, sorted by chip_id.
  std::vector<select::Candidate> Snapshot() const;
  std::vector<DecisionRecord> Log() const;

  // Latest-failure candidates, sorted by chip_id.
  std::vector<AnnotationRecord> AnnotationRecords() const;
  std::string ExportAnnotationManifest() const;

 private:
  void Apply(const DecisionRecord& record);
  select::Candidate View(const select::Candidate& base) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, select::Candidate, std::less<>> candidates_;
  std::map<std::string, select::Decision, std::less<>> latest_;
  std::vector<DecisionRecord> log_;
  std::filesystem::path log_path_;
  std::ofstream log_stream_;
  Clock clock_;
};

}  // namespace landcover::service

#endif  // LANDCOVER_REVIEW_STORE_H_
