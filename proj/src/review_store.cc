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

#include "landcover/review_store.h"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "landcover/error.h"

namespace landcover::service {

namespace {

using nlohmann::ordered_json;
using select::Candidate;
using select::Decision;

bool IsTerminal(Decision d) { return d == Decision::kFailure || d == Decision::kClean; }

}  // namespace

std::int64_t SystemClockSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string DecisionRecordToLine(const DecisionRecord& record) {
  ordered_json j;
  j["revision"] = record.revision;
  j["candidate_id"] = record.candidate_id;
  j["decision"] = select::DecisionName(record.decision);
  j["annotator"] = record.annotator;
  j["timestamp"] = record.timestamp;
  return j.dump();
}

DecisionRecord DecisionRecordFromLine(std::string_view line) {
  DecisionRecord r;
  try {
    const auto j = nlohmann::json::parse(line);
    r.revision = j.at("revision").get<std::int64_t>();
    r.candidate_id = j.at("candidate_id").get<std::string>();
    const auto decision = select::ParseDecision(j.at("decision").get<std::string>());
    if (!decision || !IsTerminal(*decision)) {
      throw Error(ErrorCode::kParse, "invalid decision in log record");
    }
    r.decision = *decision;
    r.annotator = j.at("annotator").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("decision log: ") + e.what());
  }
  return r;
}

ReviewStore::ReviewStore(std::vector<Candidate> candidates,
                         std::filesystem::path log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(std::move(clock)) {
  for (auto& c : candidates) {
    c.decision = Decision::kPending;
    c.annotation_path.reset();
    const std::string id = c.chip_id;
    if (!candidates_.emplace(id, std::move(c)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate candidate " + id);
    }
  }
  if (log_path_.empty()) return;
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::size_t start = 0;
    while (start < text.size()) {
      const std::size_t end = text.find('\n', start);
      const std::string_view line(text.data() + start,
                                  (end == std::string::npos ? text.size() : end) - start);
      if (!line.empty()) {
        DecisionRecord record;
        try {
          record = DecisionRecordFromLine(line);
        } catch (const Error&) {
          // A torn final write (no trailing newline) is dropped.
          if (end == std::string::npos) break;
          throw;
        }
        if (!candidates_.count(record.candidate_id)) {
          throw Error(ErrorCode::kParse,
                      "decision log names unknown candidate " + record.candidate_id);
        }
        if (!log_.empty() && record.revision <= log_.back().revision) {
          throw Error(ErrorCode::kParse, "decision log revisions are not increasing");
        }
        Apply(record);
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
    // Truncate any torn tail so new records start on a fresh line.
    std::size_t keep = text.rfind('\n');
    keep = keep == std::string::npos ? 0 : keep + 1;
    if (keep != text.size()) std::filesystem::resize_file(log_path_, keep);
  } else if (log_path_.has_parent_path()) {
    std::filesystem::create_directories(log_path_.parent_path());
  }
  log_stream_.open(log_path_, std::ios::binary | std::ios::app);
  if (!log_stream_) {
    throw Error(ErrorCode::kIo, "cannot open decision log " + log_path_.string());
  }
}

void ReviewStore::Apply(const DecisionRecord& record) {
  latest_[record.candidate_id] = record.decision;
  log_.push_back(record);
}

Candidate ReviewStore::View(const Candidate& base) const {
  Candidate view = base;
  const auto it = latest_.find(base.chip_id);
  if (it != latest_.end()) view.decision = it->second;
  return view;
}

CandidatePage ReviewStore::List(const CandidateFilter& filter, std::size_t offset,
                                std::size_t limit) const {
  std::shared_lock lock(mutex_);
  std::vector<Candidate> matches;
  for (const auto& [id, base] : candidates_) {
    Candidate view = View(base);
    if (filter.state && view.decision != *filter.state) continue;
    if (filter.cell && view.cell_id != *filter.cell) continue;
    matches.push_back(std::move(view));
  }
  std::stable_sort(matches.begin(), matches.end(), [](const Candidate& a, const Candidate& b) {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    return a.chip_id < b.chip_id;
  });
  CandidatePage page;
  page.total = matches.size();
  if (offset < matches.size()) {
    const std::size_t end = offset + std::min(limit, matches.size() - offset);
    page.items.assign(std::make_move_iterator(matches.begin() + offset),
                      std::make_move_iterator(matches.begin() + end));
  }
  return page;
}

DecisionRecord ReviewStore::Record(std::string_view candidate_id, Decision decision,
                                   std::string_view annotator) {
  if (!IsTerminal(decision)) {
    throw Error(ErrorCode::kInvalidArgument, "decision must be failure or clean");
  }
  if (annotator.empty()) throw Error(ErrorCode::kInvalidArgument, "annotator is required");
  std::unique_lock lock(mutex_);
  if (candidates_.find(candidate_id) == candidates_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown candidate " + std::string(candidate_id));
  }
  DecisionRecord record;
  record.revision = log_.empty() ? 1 : log_.back().revision + 1;
  record.candidate_id = std::string(candidate_id);
  record.decision = decision;
  record.annotator = std::string(annotator);
  record.timestamp = clock_();
  if (log_stream_.is_open()) {
    log_stream_ << DecisionRecordToLine(record) << '\n';
    log_stream_.flush();
    if (!log_stream_) throw Error(ErrorCode::kIo, "failed to append to decision log");
  }
  Apply(record);
  return record;
}

std::optional<Candidate> ReviewStore::Get(std::string_view candidate_id) const {
  std::shared_lock lock(mutex_);
  const auto it = candidates_.find(candidate_id);
  if (it == candidates_.end()) return std::nullopt;
  return View(it->second);
}

std::vector<Candidate> ReviewStore::Snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<Candidate> out;
  for (const auto& [id, base] : candidates_) out.push_back(View(base));
  return out;
}

std::vector<DecisionRecord> ReviewStore::Log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

std::vector<AnnotationRecord> ReviewStore::AnnotationRecords() const {
  std::shared_lock lock(mutex_);
  std::vector<AnnotationRecord> out;
  for (const auto& [id, base] : candidates_) {  // map order = chip_id order
    const auto it = latest_.find(id);
    if (it == latest_.end() || it->second != Decision::kFailure) continue;
    out.push_back({id, base.cell_id, base.rgb_path,
                   std::string(kAnnotationDir) + "/" + id + ".png"});
  }
  return out;
}

std::string ReviewStore::ExportAnnotationManifest() const {
  return AnnotationManifestToJson(AnnotationRecords());
}

}  // namespace landcover::service
