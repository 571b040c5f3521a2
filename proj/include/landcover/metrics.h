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

#ifndef LANDCOVER_METRICS_H_
#define LANDCOVER_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landcover/classes.h"
#include "landcover/raster.h"

namespace landcover::metrics {

// Counts indexed [truth][prediction] by class id. Row and column 0 hold the
// unlabeled class so that predictions of 0 still count against accuracy;
// per-class metrics are reported for classes 1..num_classes only.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes = kNumClasses);

  int num_classes() const { return num_classes_; }
  std::uint64_t count(int truth, int predicted) const {
    return counts_[index(truth, predicted)];
  }
  void Add(int truth, int predicted, std::uint64_t n = 1);

  std::uint64_t Total() const;
  std::uint64_t TruePositives(int c) const;
  std::uint64_t FalseNegatives(int c) const;
  std::uint64_t FalsePositives(int c) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t index(int truth, int predicted) const {
    return static_cast<std::size_t>(truth) * (num_classes_ + 1) + predicted;
  }

  int num_classes_;
  std::vector<std::uint64_t> counts_;
};

// Exact numerator/denominator pair behind a reported fraction.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  std::optional<double> value() const;
};

// Per-class vectors are indexed by class id - 1. nullopt marks an undefined
// value (zero denominator); undefined classes are left out of AA and mIoU.
struct MetricsReport {
  int num_classes = kNumClasses;
  std::vector<Ratio> pa_ratio;
  std::vector<Ratio> iou_ratio;
  Ratio oa_ratio;

  std::vector<std::optional<double>> pa;
  std::vector<std::optional<double>> iou;
  std::optional<double> aa;
  std::optional<double> oa;
  std::optional<double> miou;
};

// Throws kShape on dimension mismatch. Pixels whose truth equals
// `ignore_index` are skipped.
ConfusionMatrix AccumulateConfusion(const LabelRaster& predicted,
                                    const LabelRaster& truth,
                                    ClassId ignore_index = ClassId::Unlabeled());

// Throws kSize when the class counts differ.
ConfusionMatrix MergeConfusion(const ConfusionMatrix& a, const ConfusionMatrix& b);

MetricsReport ComputeMetrics(const ConfusionMatrix& cm);

// Row-stochastic version of the class block (classes 1..K): rows with a
// positive sum are divided by it, empty rows stay zero.
std::vector<std::vector<double>> NormalizeConfusion(const ConfusionMatrix& cm);

// JSON document with keys num_classes, class_names, confusion, pa, aa, oa,
// iou, miou (per-class arrays in class-id order, null when undefined).
std::string MetricsReportToJson(const MetricsReport& report,
                                const ConfusionMatrix* cm = nullptr);

// Human-readable percentages with two decimals, one line per metric.
std::string FormatMetricsTable(const MetricsReport& report);

// CSV with class names as header row and first column.
std::string NormalizedConfusionCsv(const ConfusionMatrix& cm);

enum class PixelOutcome : std::uint8_t {
  kTrueNegative = 0,
  kTruePositive = 1,
  kFalsePositive = 2,
  kFalseNegative = 3,
};

struct ErrorRaster {
  int width = 0;
  int height = 0;
  std::vector<PixelOutcome> outcomes;

  PixelOutcome at(int col, int row) const {
    return outcomes[static_cast<std::size_t>(row) * width + col];
  }
};

// White / black / red / green for TP / TN / FP / FN.
Rgb OutcomeColor(PixelOutcome outcome);

// Throws kShape on dimension mismatch.
ErrorRaster ErrorMap(const BinaryMask& predicted, const BinaryMask& truth);
RgbImage RenderErrorMap(const ErrorRaster& errors);

}  // namespace landcover::metrics

#endif  // LANDCOVER_METRICS_H_
