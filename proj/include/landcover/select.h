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

#ifndef LANDCOVER_SELECT_H_
#define LANDCOVER_SELECT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/classes.h"
#include "landcover/raster.h"

namespace landcover::select {

enum class Decision { kPending, kFailure, kClean };
enum class CandidateSource { kHuman, kEntropy };

std::string_view DecisionName(Decision decision);
std::optional<Decision> ParseDecision(std::string_view text);
std::string_view SourceName(CandidateSource source);
std::optional<CandidateSource> ParseSource(std::string_view text);

// Only pending -> failure and pending -> clean are valid transitions.
bool IsValidTransition(Decision from, Decision to);

// A chip queued for human triage.
struct Candidate {
  std::string chip_id;
  std::string cell_id;
  double entropy = 0.0;
  Decision decision = Decision::kPending;
  CandidateSource source = CandidateSource::kEntropy;
  std::string rgb_path;
  // Set only once the candidate is marked a failure and labeled.
  std::optional<std::string> annotation_path;

  // Applies a triage decision; throws kInvalidArgument on an invalid
  // transition or when an annotation accompanies a non-failure decision.
  void Decide(Decision to, std::optional<std::string> annotation = std::nullopt);
};

// Geographic stratification grid of square lon/lat cells.
class CellGrid {
 public:
  explicit CellGrid(double cell_size_deg = 1.0);

  double cell_size_deg() const { return cell_size_deg_; }
  // E.g. "cell_139_35" for (139.7, 35.6) with 1-degree cells.
  std::string CellIdFor(LonLat point) const;

 private:
  double cell_size_deg_;
};

// Mean per-pixel Shannon entropy divided by ln(k); in [0, 1].
double ChipEntropy(const ProbRaster& probs);

inline constexpr int kDefaultCandidatesPerCell = 2;

// Per cell, the min(k, cell size) highest-entropy candidates (ties by
// ascending chip_id), ordered by cell_id then descending entropy.
std::vector<Candidate> StratifiedTopK(std::vector<Candidate> scored,
                                      int k = kDefaultCandidatesPerCell);

// Total map from source class to target class.
class RemapRule {
 public:
  RemapRule();  // identity

  // Throws kRule when any target is not a valid class index.
  explicit RemapRule(const std::array<int, kNumClasses + 1>& mapping);

  // Parses "source -> target" lines; classes are indices or names, '#'
  // starts a comment, unmentioned classes map to themselves. Throws kRule on
  // duplicates, unknown classes, or malformed lines.
  static RemapRule Parse(std::string_view text);

  std::uint8_t Map(std::uint8_t source) const { return mapping_[source]; }
  const std::array<std::uint8_t, kNumClasses + 1>& mapping() const {
    return mapping_;
  }

  // (this then next): x -> next.Map(this->Map(x)).
  RemapRule Then(const RemapRule& next) const;
  std::string ToText() const;

  friend bool operator==(const RemapRule&, const RemapRule&) = default;

 private:
  std::array<std::uint8_t, kNumClasses + 1> mapping_{};
};

// Collapses building, developed space and road into one built-up class
// (carried by the building index), matching the JHR LULC "Built-up"
// category; every other class is already one-to-one.
RemapRule BuiltUpCollapseRule();

LabelRaster ApplyClassRemap(const LabelRaster& labels, const RemapRule& rule);

struct SplitRatios {
  double train = 0.60;
  double val = 0.10;
  double test = 0.30;
};

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

// Seeded shuffle of the sorted ids followed by contiguous cuts of
// floor(n*train), floor(n*val) and the remainder. Each output list is sorted.
SplitAssignment AssignSplits(std::vector<std::string> ids,
                             const SplitRatios& ratios, std::uint64_t seed);

// Structured selection report consumed by the review service.
std::string SelectionReportToJson(const std::vector<Candidate>& candidates);
std::vector<Candidate> SelectionReportFromJson(std::string_view text);

}  // namespace landcover::select

#endif  // LANDCOVER_SELECT_H_
