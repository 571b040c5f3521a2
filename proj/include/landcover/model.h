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

#ifndef LANDCOVER_MODEL_H_
#define LANDCOVER_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/classes.h"
#include "landcover/raster.h"

namespace landcover::model {

// Per-pixel features: r, g, b scaled to [0,1]; 5x5 local mean per channel;
// 5x5 local standard deviation per channel; constant 1. Windows replicate
// edge pixels.
inline constexpr int kFeatureDim = 10;
inline constexpr int kFeatureWindowRadius = 2;

struct FeatureRaster {
  int width = 0;
  int height = 0;
  std::vector<float> values;  // pixel-major, kFeatureDim per pixel

  std::span<const float> pixel(std::size_t index) const {
    return std::span<const float>(values).subspan(index * kFeatureDim, kFeatureDim);
  }
};

FeatureRaster ExtractFeatures(const RgbImage& rgb);

// Multinomial logistic model: logits = weights * features + bias.
struct ClassifierParams {
  int feature_dim = kFeatureDim;
  int num_classes = kNumClasses;
  std::vector<double> weights;  // num_classes x feature_dim, row-major
  std::vector<double> bias;     // num_classes
  std::uint64_t seed = 0;
  int epochs_trained = 0;

  static ClassifierParams Zero(int feature_dim, int num_classes, std::uint64_t seed);
  // Throws kShape for inconsistent dimensions, kInvalidArgument for
  // non-finite values.
  void Validate() const;

  friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.01;
  int batch_pixels = 512;
  std::uint64_t seed = 0;
};

struct LabeledImage {
  RgbImage rgb;
  LabelRaster labels;
};

// Mini-batch Adam on the mean cross-entropy of every labeled (non-zero)
// pixel, starting from zero weights. Bit-exact given the inputs and config.
// Throws kEmptyDataset when no pixel carries a label.
ClassifierParams TrainClassifier(std::span<const LabeledImage> images,
                                 const TrainConfig& config);

void Softmax(std::span<const double> logits, std::span<double> probs);

// d(-ln softmax(logits)[target]) / d logits = softmax - onehot.
std::vector<double> LogitGradient(std::span<const double> logits, int target);

struct BatchGradient {
  double loss = 0.0;
  std::vector<double> weights;
  std::vector<double> bias;
};

// Mean cross-entropy over the samples and its gradient with respect to the
// weights and bias. `features` holds samples x feature_dim values; targets
// are class offsets in [0, num_classes).
BatchGradient ComputeBatchGradient(const ClassifierParams& params,
                                   std::span<const double> features,
                                   std::span<const int> targets);

inline constexpr double kProbabilityFloor = 1e-12;

// Mean of -ln p[truth] over pixels whose truth differs from ignore_index.
// Throws kShape on size mismatch.
double CrossEntropyLoss(const ProbRaster& probs, const LabelRaster& truth,
                        ClassId ignore_index = ClassId::Unlabeled());

// Throws kShape when the params do not match the feature layout.
ProbRaster PredictProbs(const ClassifierParams& params, const RgbImage& rgb);
ProbRaster PredictProbs(const ClassifierParams& params, const Chip& chip);

// Argmax over classes, ties resolved toward the lowest class index.
LabelRaster ArgmaxLabels(const ProbRaster& probs);

// Averages chip probabilities where windows overlap.
class ProbabilityBlender {
 public:
  ProbabilityBlender(int width, int height, int num_classes);

  // Throws kShape when the chip falls outside the canvas.
  void Add(ChipOffset offset, const ProbRaster& chip);
  // Throws kInvalidArgument if some pixel received no contribution.
  ProbRaster Finish() const;

 private:
  int width_;
  int height_;
  int num_classes_;
  std::vector<double> sums_;
  std::vector<std::uint32_t> counts_;
};

// Sliding-window inference over a large raster with overlap averaging.
ProbRaster PredictRaster(const ClassifierParams& params, const RgbImage& raster,
                         int chip_size, int stride);

// External probability manifest: one "chip_id oemp_path" record per line,
// '#' comments, relative paths resolved against the manifest's directory.
struct ExternalProbEntry {
  std::string chip_id;
  std::filesystem::path oemp_path;
};

std::vector<ExternalProbEntry> ParseExternalManifest(
    std::string_view text, const std::filesystem::path& base_dir = {});
std::vector<ExternalProbEntry> ReadExternalManifest(const std::filesystem::path& path);
std::string ExternalManifestToText(std::span<const ExternalProbEntry> entries);

// Throws kMissingFile naming the path, kShape when the raster is not
// expected_width x expected_height, kNormalization from decoding.
ProbRaster LoadExternalProbs(const ExternalProbEntry& entry, int expected_width,
                             int expected_height);

std::string ParamsToJson(const ClassifierParams& params);
ClassifierParams ParamsFromJson(std::string_view text);
void SaveParams(const std::filesystem::path& path, const ClassifierParams& params);
ClassifierParams LoadParams(const std::filesystem::path& path);

}  // namespace landcover::model

#endif  // LANDCOVER_MODEL_H_
