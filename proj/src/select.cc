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

#include "landcover/select.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/random.h"

namespace landcover::select {

std::string_view DecisionName(Decision decision) {
  switch (decision) {
    case Decision::kPending: return "pending";
    case Decision::kFailure: return "failure";
    case Decision::kClean: return "clean";
  }
  return "pending";
}

std::optional<Decision> ParseDecision(std::string_view text) {
  if (text == "pending") return Decision::kPending;
  if (text == "failure") return Decision::kFailure;
  if (text == "clean") return Decision::kClean;
  return std::nullopt;
}

std::string_view SourceName(CandidateSource source) {
  return source == CandidateSource::kHuman ? "human" : "entropy";
}

std::optional<CandidateSource> ParseSource(std::string_view text) {
  if (text == "human") return CandidateSource::kHuman;
  if (text == "entropy") return CandidateSource::kEntropy;
  return std::nullopt;
}

bool IsValidTransition(Decision from, Decision to) {
  return from == Decision::kPending && to != Decision::kPending;
}

void Candidate::Decide(Decision to, std::optional<std::string> annotation) {
  if (!IsValidTransition(decision, to)) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate " + chip_id + " cannot move from " +
                    std::string(DecisionName(decision)) + " to " +
                    std::string(DecisionName(to)));
  }
  if (annotation && to != Decision::kFailure) {
    throw Error(ErrorCode::kInvalidArgument,
                "annotation given for non-failure candidate " + chip_id);
  }
  decision = to;
  annotation_path = std::move(annotation);
}

CellGrid::CellGrid(double cell_size_deg) : cell_size_deg_(cell_size_deg) {
  if (!(cell_size_deg > 0.0) || !std::isfinite(cell_size_deg)) {
    throw Error(ErrorCode::kInvalidArgument, "cell size must be positive");
  }
}

std::string CellGrid::CellIdFor(LonLat point) const {
  const auto ix = static_cast<long long>(std::floor(point.lon / cell_size_deg_));
  const auto iy = static_cast<long long>(std::floor(point.lat / cell_size_deg_));
  return "cell_" + std::to_string(ix) + "_" + std::to_string(iy);
}

double ChipEntropy(const ProbRaster& probs) {
  const std::size_t pixels = probs.pixel_count();
  const int k = probs.num_classes();
  if (pixels == 0 || k < 2) return 0.0;
  // Base-2 logs give exact values for dyadic probabilities; the ratio equals
  // the nats / ln(k) normalization.
  const double max_entropy = std::log2(static_cast<double>(k));
  long double total = 0.0L;
  for (std::size_t p = 0; p < pixels; ++p) {
    double h = 0.0;
    for (int c = 0; c < k; ++c) {
      const double v = probs.at(c, p);
      if (v > 0.0) h -= v * std::log2(v);
    }
    total += h;
  }
  const double mean = static_cast<double>(total / static_cast<long double>(pixels));
  return std::clamp(mean / max_entropy, 0.0, 1.0);
}

std::vector<Candidate> StratifiedTopK(std::vector<Candidate> scored, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cell_id != b.cell_id) return a.cell_id < b.cell_id;
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    return a.chip_id < b.chip_id;
  });
  std::vector<Candidate> out;
  std::string current_cell;
  int taken = 0;
  for (auto& c : scored) {
    if (out.empty() || c.cell_id != current_cell) {
      current_cell = c.cell_id;
      taken = 0;
    }
    if (taken < k) {
      out.push_back(std::move(c));
      ++taken;
    }
  }
  return out;
}

RemapRule::RemapRule() {
  for (int i = 0; i <= kNumClasses; ++i) mapping_[i] = static_cast<std::uint8_t>(i);
}

RemapRule::RemapRule(const std::array<int, kNumClasses + 1>& mapping) {
  for (int i = 0; i <= kNumClasses; ++i) {
    if (!IsValidClassIndex(mapping[i])) {
      throw Error(ErrorCode::kRule, "rule maps class " + std::to_string(i) +
                                        " to invalid class " +
                                        std::to_string(mapping[i]));
    }
    mapping_[i] = static_cast<std::uint8_t>(mapping[i]);
  }
}

RemapRule RemapRule::Parse(std::string_view text) {
  std::array<int, kNumClasses + 1> mapping{};
  for (int i = 0; i <= kNumClasses; ++i) mapping[i] = i;
  std::set<int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw Error(ErrorCode::kRule,
                  "line " + std::to_string(line_number) + ": expected 'source -> target'");
    }
    const auto source = ParseClass(std::string_view(line).substr(0, arrow));
    const std::string target_text = line.substr(arrow + 2);
    const auto target = ParseClass(target_text);
    if (!source) {
      throw Error(ErrorCode::kRule,
                  "line " + std::to_string(line_number) + ": unknown source class");
    }
    if (!target) {
      throw Error(ErrorCode::kRule, "line " + std::to_string(line_number) +
                                        ": invalid target class '" +
                                        target_text + "'");
    }
    if (!seen.insert(source->index()).second) {
      throw Error(ErrorCode::kRule, "line " + std::to_string(line_number) +
                                        ": class " +
                                        std::to_string(source->index()) +
                                        " mapped twice");
    }
    mapping[source->index()] = target->index();
  }
  return RemapRule(mapping);
}

RemapRule RemapRule::Then(const RemapRule& next) const {
  std::array<int, kNumClasses + 1> composed{};
  for (int i = 0; i <= kNumClasses; ++i) composed[i] = next.Map(Map(i));
  return RemapRule(composed);
}

std::string RemapRule::ToText() const {
  std::ostringstream out;
  for (int i = 0; i <= kNumClasses; ++i) {
    out << i << " -> " << static_cast<int>(mapping_[i]) << "\n";
  }
  return out.str();
}

RemapRule BuiltUpCollapseRule() {
  std::array<int, kNumClasses + 1> mapping{};
  for (int i = 0; i <= kNumClasses; ++i) mapping[i] = i;
  mapping[kDevelopedSpace] = kBuilding;
  mapping[kRoad] = kBuilding;
  return RemapRule(mapping);
}

LabelRaster ApplyClassRemap(const LabelRaster& labels, const RemapRule& rule) {
  std::vector<std::uint8_t> out(labels.data().begin(), labels.data().end());
  for (auto& v : out) v = rule.Map(v);
  return LabelRaster(labels.width(), labels.height(), std::move(out), labels.geo());
}

SplitAssignment AssignSplits(std::vector<std::string> ids,
                             const SplitRatios& ratios, std::uint64_t seed) {
  if (ids.empty()) throw Error(ErrorCode::kEmptyDataset, "no chip ids to split");
  if (!(ratios.train > 0.0 && ratios.val > 0.0 && ratios.test > 0.0) ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "split ratios must be positive and sum to 1");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate chip ids in split input");
  }
  Rng rng(seed);
  rng.Shuffle(std::span<std::string>(ids));
  const double n = static_cast<double>(ids.size());
  // The epsilon absorbs products such as 0.29 * 100 = 28.999999999999996.
  const auto n_train = static_cast<std::size_t>(std::floor(n * ratios.train + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(n * ratios.val + 1e-9));
  SplitAssignment out;
  out.train.assign(ids.begin(), ids.begin() + n_train);
  out.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  out.test.assign(ids.begin() + n_train + n_val, ids.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::string SelectionReportToJson(const std::vector<Candidate>& candidates) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : candidates) {
    nlohmann::json item = {
        {"chip_id", c.chip_id},
        {"cell_id", c.cell_id},
        {"entropy", c.entropy},
        {"source", SourceName(c.source)},
        {"decision", DecisionName(c.decision)},
        {"rgb_path", c.rgb_path},
    };
    if (c.annotation_path) item["annotation_path"] = *c.annotation_path;
    list.push_back(std::move(item));
  }
  return nlohmann::json{{"candidates", list}}.dump(2) + "\n";
}

std::vector<Candidate> SelectionReportFromJson(std::string_view text) {
  std::vector<Candidate> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& item : doc.at("candidates")) {
      Candidate c;
      c.chip_id = item.at("chip_id").get<std::string>();
      c.cell_id = item.at("cell_id").get<std::string>();
      c.entropy = item.at("entropy").get<double>();
      c.rgb_path = item.value("rgb_path", "");
      const auto source = ParseSource(item.value("source", "entropy"));
      const auto decision = ParseDecision(item.value("decision", "pending"));
      if (!source || !decision) {
        throw Error(ErrorCode::kParse, "bad source/decision for " + c.chip_id);
      }
      if (!(c.entropy >= 0.0 && c.entropy <= 1.0)) {
        throw Error(ErrorCode::kParse, "entropy outside [0,1] for " + c.chip_id);
      }
      c.source = *source;
      c.decision = *decision;
      if (item.contains("annotation_path")) {
        c.annotation_path = item["annotation_path"].get<std::string>();
      }
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("selection report: ") + e.what());
  }
  return out;
}

}  // namespace landcover::select
