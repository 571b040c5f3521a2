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

#include "landcover/metrics.h"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "landcover/error.h"

namespace landcover::metrics {

namespace {

void CheckClass(int c, int num_classes) {
  if (c < 0 || c > num_classes) {
    throw Error(ErrorCode::kInvalidClass,
                "class " + std::to_string(c) + " outside confusion matrix");
  }
}

// Mean of the defined ratios, summed from the integer counts in extended
// precision and rounded to double once.
std::optional<double> MeanOfDefined(const std::vector<Ratio>& ratios) {
  long double sum = 0.0L;
  int n = 0;
  for (const auto& r : ratios) {
    if (r.denominator == 0) continue;
    sum += static_cast<long double>(r.numerator) / static_cast<long double>(r.denominator);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(sum / n);
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string Percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v * 100.0);
  return buf;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
  if (num_classes < 1 || num_classes > 255) {
    throw Error(ErrorCode::kSize, "confusion matrix needs 1..255 classes");
  }
  counts_.assign(static_cast<std::size_t>(num_classes + 1) * (num_classes + 1), 0);
}

void ConfusionMatrix::Add(int truth, int predicted, std::uint64_t n) {
  CheckClass(truth, num_classes_);
  CheckClass(predicted, num_classes_);
  counts_[index(truth, predicted)] += n;
}

std::uint64_t ConfusionMatrix::Total() const {
  std::uint64_t total = 0;
  for (auto v : counts_) total += v;
  return total;
}

std::uint64_t ConfusionMatrix::TruePositives(int c) const { return count(c, c); }

std::uint64_t ConfusionMatrix::FalseNegatives(int c) const {
  std::uint64_t sum = 0;
  for (int j = 0; j <= num_classes_; ++j) {
    if (j != c) sum += count(c, j);
  }
  return sum;
}

std::uint64_t ConfusionMatrix::FalsePositives(int c) const {
  std::uint64_t sum = 0;
  for (int i = 0; i <= num_classes_; ++i) {
    if (i != c) sum += count(i, c);
  }
  return sum;
}

std::optional<double> Ratio::value() const {
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

ConfusionMatrix AccumulateConfusion(const LabelRaster& predicted,
                                    const LabelRaster& truth,
                                    ClassId ignore_index) {
  if (predicted.width() != truth.width() || predicted.height() != truth.height()) {
    throw Error(ErrorCode::kShape,
                "prediction " + std::to_string(predicted.width()) + "x" +
                    std::to_string(predicted.height()) + " vs truth " +
                    std::to_string(truth.width()) + "x" +
                    std::to_string(truth.height()));
  }
  ConfusionMatrix cm(kNumClasses);
  const auto p = predicted.data();
  const auto t = truth.data();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == ignore_index.index()) continue;
    cm.Add(t[i], p[i]);
  }
  return cm;
}

ConfusionMatrix MergeConfusion(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  if (a.num_classes() != b.num_classes()) {
    throw Error(ErrorCode::kSize, "cannot merge confusion matrices with " +
                                      std::to_string(a.num_classes()) + " and " +
                                      std::to_string(b.num_classes()) +
                                      " classes");
  }
  ConfusionMatrix out = a;
  for (int i = 0; i <= a.num_classes(); ++i) {
    for (int j = 0; j <= a.num_classes(); ++j) {
      out.Add(i, j, b.count(i, j));
    }
  }
  return out;
}

MetricsReport ComputeMetrics(const ConfusionMatrix& cm) {
  MetricsReport report;
  const int k = cm.num_classes();
  report.num_classes = k;
  std::uint64_t correct = 0;
  std::uint64_t reference = 0;
  for (int c = 1; c <= k; ++c) {
    const std::uint64_t tp = cm.TruePositives(c);
    const std::uint64_t fn = cm.FalseNegatives(c);
    const std::uint64_t fp = cm.FalsePositives(c);
    correct += tp;
    reference += tp + fn;
    report.pa_ratio.push_back({tp, tp + fn});
    report.iou_ratio.push_back({tp, tp + fn + fp});
    report.pa.push_back(report.pa_ratio.back().value());
    report.iou.push_back(report.iou_ratio.back().value());
  }
  report.oa_ratio = {correct, reference};
  report.oa = report.oa_ratio.value();
  report.aa = MeanOfDefined(report.pa_ratio);
  report.miou = MeanOfDefined(report.iou_ratio);
  return report;
}

std::vector<std::vector<double>> NormalizeConfusion(const ConfusionMatrix& cm) {
  const int k = cm.num_classes();
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (int i = 1; i <= k; ++i) {
    std::uint64_t row_sum = 0;
    for (int j = 1; j <= k; ++j) row_sum += cm.count(i, j);
    if (row_sum == 0) continue;
    for (int j = 1; j <= k; ++j) {
      out[i - 1][j - 1] =
          static_cast<double>(cm.count(i, j)) / static_cast<double>(row_sum);
    }
  }
  return out;
}

std::string MetricsReportToJson(const MetricsReport& report,
                                const ConfusionMatrix* cm) {
  nlohmann::json doc;
  doc["num_classes"] = report.num_classes;
  nlohmann::json names = nlohmann::json::array();
  nlohmann::json pa = nlohmann::json::array();
  nlohmann::json iou = nlohmann::json::array();
  for (int c = 1; c <= report.num_classes; ++c) {
    names.push_back(c <= kNumClasses ? std::string(ClassName(ClassId(c)))
                                     : "class " + std::to_string(c));
    pa.push_back(OptionalJson(report.pa[c - 1]));
    iou.push_back(OptionalJson(report.iou[c - 1]));
  }
  doc["class_names"] = names;
  doc["pa"] = pa;
  doc["aa"] = OptionalJson(report.aa);
  doc["oa"] = OptionalJson(report.oa);
  doc["iou"] = iou;
  doc["miou"] = OptionalJson(report.miou);
  if (cm != nullptr) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i <= cm->num_classes(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j <= cm->num_classes(); ++j) row.push_back(cm->count(i, j));
      rows.push_back(row);
    }
    doc["confusion"] = rows;
  }
  return doc.dump(2) + "\n";
}

std::string FormatMetricsTable(const MetricsReport& report) {
  std::ostringstream out;
  out << "class                 PA(%)   IoU(%)\n";
  for (int c = 1; c <= report.num_classes; ++c) {
    std::string name = c <= kNumClasses ? std::string(ClassName(ClassId(c)))
                                        : "class " + std::to_string(c);
    name.resize(20, ' ');
    out << name << "  " << Percent(report.pa[c - 1]) << "  "
        << Percent(report.iou[c - 1]) << "\n";
  }
  out << "AA(%)   " << Percent(report.aa) << "\n";
  out << "OA(%)   " << Percent(report.oa) << "\n";
  out << "mIoU(%) " << Percent(report.miou) << "\n";
  return out.str();
}

std::string NormalizedConfusionCsv(const ConfusionMatrix& cm) {
  const auto normalized = NormalizeConfusion(cm);
  const int k = cm.num_classes();
  auto name = [](int c) {
    return c <= kNumClasses ? std::string(ClassName(ClassId(c)))
                            : "class " + std::to_string(c);
  };
  std::ostringstream out;
  out << "truth\\predicted";
  for (int c = 1; c <= k; ++c) out << "," << name(c);
  out << "\n";
  char buf[32];
  for (int i = 1; i <= k; ++i) {
    out << name(i);
    for (int j = 1; j <= k; ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", normalized[i - 1][j - 1]);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

Rgb OutcomeColor(PixelOutcome outcome) {
  switch (outcome) {
    case PixelOutcome::kTruePositive: return {255, 255, 255};
    case PixelOutcome::kTrueNegative: return {0, 0, 0};
    case PixelOutcome::kFalsePositive: return {255, 0, 0};
    case PixelOutcome::kFalseNegative: return {0, 255, 0};
  }
  return {0, 0, 0};
}

ErrorRaster ErrorMap(const BinaryMask& predicted, const BinaryMask& truth) {
  if (predicted.width() != truth.width() || predicted.height() != truth.height()) {
    throw Error(ErrorCode::kShape, "error map masks differ in size");
  }
  ErrorRaster out{predicted.width(), predicted.height(), {}};
  out.outcomes.reserve(predicted.size());
  const auto p = predicted.bits();
  const auto t = truth.bits();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] && t[i]) {
      out.outcomes.push_back(PixelOutcome::kTruePositive);
    } else if (!p[i] && !t[i]) {
      out.outcomes.push_back(PixelOutcome::kTrueNegative);
    } else if (p[i]) {
      out.outcomes.push_back(PixelOutcome::kFalsePositive);
    } else {
      out.outcomes.push_back(PixelOutcome::kFalseNegative);
    }
  }
  return out;
}

RgbImage RenderErrorMap(const ErrorRaster& errors) {
  RgbImage image(errors.width, errors.height);
  for (int row = 0; row < errors.height; ++row) {
    for (int col = 0; col < errors.width; ++col) {
      image.set(col, row, OutcomeColor(errors.at(col, row)));
    }
  }
  return image;
}

}  // namespace landcover::metrics
