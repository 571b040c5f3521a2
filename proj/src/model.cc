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

#include "landcover/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/oemp_codec.h"
#include "landcover/random.h"
#include "landcover/tiles.h"

namespace landcover::model {

namespace {

constexpr char kParamsFormat[] = "landcover-classifier";
constexpr int kParamsVersion = 1;

// Writes logits = W x + b for one sample.
template <typename T>
void Logits(const ClassifierParams& params, const T* x, double* logits) {
  const int d = params.feature_dim;
  for (int c = 0; c < params.num_classes; ++c) {
    const double* w = params.weights.data() + static_cast<std::size_t>(c) * d;
    double z = params.bias[c];
    for (int f = 0; f < d; ++f) z += w[f] * static_cast<double>(x[f]);
    logits[c] = z;
  }
}

void SoftmaxInPlace(double* values, int n) {
  const double top = *std::max_element(values, values + n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    values[i] = std::exp(values[i] - top);
    sum += values[i];
  }
  for (int i = 0; i < n; ++i) values[i] /= sum;
}

// Accumulates the summed loss and gradient of `count` samples; the caller
// divides by the batch size.
template <typename T>
double AccumulateGradient(const ClassifierParams& params, const T* features,
                          const int* targets, const std::size_t* order,
                          std::size_t count, std::vector<double>& grad_w,
                          std::vector<double>& grad_b, std::vector<double>& work) {
  const int d = params.feature_dim;
  const int k = params.num_classes;
  double loss = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t i = order != nullptr ? order[s] : s;
    const T* x = features + i * d;
    Logits(params, x, work.data());
    SoftmaxInPlace(work.data(), k);
    const int target = targets[i];
    loss -= std::log(std::max(work[target], kProbabilityFloor));
    work[target] -= 1.0;
    for (int c = 0; c < k; ++c) {
      const double g = work[c];
      double* gw = grad_w.data() + static_cast<std::size_t>(c) * d;
      for (int f = 0; f < d; ++f) gw[f] += g * static_cast<double>(x[f]);
      grad_b[c] += g;
    }
  }
  return loss;
}

class AdamState {
 public:
  explicit AdamState(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

  void Step(std::span<double> params, std::span<const double> grad,
            double learning_rate, double bias1, double bias2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kAdamBeta1 * m_[i] + (1.0 - kAdamBeta1) * grad[i];
      v_[i] = kAdamBeta2 * v_[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / bias1;
      const double v_hat = v_[i] / bias2;
      params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
};

void CheckFeatureLayout(const ClassifierParams& params) {
  params.Validate();
  if (params.feature_dim != kFeatureDim) {
    throw Error(ErrorCode::kShape, "classifier expects " +
                                       std::to_string(params.feature_dim) +
                                       " features, extractor produces " +
                                       std::to_string(kFeatureDim));
  }
}

}  // namespace

FeatureRaster ExtractFeatures(const RgbImage& rgb) {
  const int w = rgb.width();
  const int h = rgb.height();
  FeatureRaster out{w, h, {}};
  out.values.resize(static_cast<std::size_t>(w) * h * kFeatureDim);
  const auto data = rgb.data();
  auto channel = [&](int col, int row, int ch) -> std::int64_t {
    col = std::clamp(col, 0, w - 1);
    row = std::clamp(row, 0, h - 1);
    return data[3 * (static_cast<std::size_t>(row) * w + col) + ch];
  };
  constexpr int r = kFeatureWindowRadius;
  constexpr std::int64_t window = (2 * r + 1) * (2 * r + 1);
  constexpr double scale = 255.0;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      float* f = out.values.data() +
                 (static_cast<std::size_t>(row) * w + col) * kFeatureDim;
      for (int ch = 0; ch < 3; ++ch) {
        // Integer sums keep constant windows at exactly zero variance.
        std::int64_t sum = 0;
        std::int64_t sq = 0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            const std::int64_t v = channel(col + dx, row + dy, ch);
            sum += v;
            sq += v * v;
          }
        }
        const double var = static_cast<double>(window * sq - sum * sum) /
                           static_cast<double>(window * window);
        f[ch] = static_cast<float>(channel(col, row, ch) / scale);
        f[3 + ch] = static_cast<float>(static_cast<double>(sum) / window / scale);
        f[6 + ch] = static_cast<float>(std::sqrt(var) / scale);
      }
      f[9] = 1.0f;
    }
  }
  return out;
}

ClassifierParams ClassifierParams::Zero(int feature_dim, int num_classes,
                                        std::uint64_t seed) {
  ClassifierParams p;
  p.feature_dim = feature_dim;
  p.num_classes = num_classes;
  p.weights.assign(static_cast<std::size_t>(feature_dim) * num_classes, 0.0);
  p.bias.assign(num_classes, 0.0);
  p.seed = seed;
  p.epochs_trained = 0;
  p.Validate();
  return p;
}

void ClassifierParams::Validate() const {
  if (feature_dim < 1 || num_classes < 1 ||
      weights.size() != static_cast<std::size_t>(feature_dim) * num_classes ||
      bias.size() != static_cast<std::size_t>(num_classes)) {
    throw Error(ErrorCode::kShape, "classifier parameter dimensions are inconsistent");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights.begin(), weights.end(), finite) ||
      !std::all_of(bias.begin(), bias.end(), finite)) {
    throw Error(ErrorCode::kInvalidArgument, "classifier parameters must be finite");
  }
  if (epochs_trained < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative epoch count");
  }
}

ClassifierParams TrainClassifier(std::span<const LabeledImage> images,
                                 const TrainConfig& config) {
  if (config.epochs < 0 || !(config.learning_rate > 0.0) || config.batch_pixels < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "training needs epochs >= 0, learning_rate > 0, batch_pixels >= 1");
  }
  std::vector<float> features;
  std::vector<int> targets;
  for (const auto& image : images) {
    if (image.rgb.width() != image.labels.width() ||
        image.rgb.height() != image.labels.height()) {
      throw Error(ErrorCode::kShape, "training image and labels differ in size");
    }
    const FeatureRaster fr = ExtractFeatures(image.rgb);
    const auto labels = image.labels.data();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == 0) continue;
      const auto px = fr.pixel(i);
      features.insert(features.end(), px.begin(), px.end());
      targets.push_back(labels[i] - 1);
    }
  }
  if (targets.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no labeled pixels to train on");
  }

  ClassifierParams params = ClassifierParams::Zero(kFeatureDim, kNumClasses, config.seed);
  AdamState adam_w(params.weights.size());
  AdamState adam_b(params.bias.size());
  std::vector<double> grad_w(params.weights.size());
  std::vector<double> grad_b(params.bias.size());
  std::vector<double> work(params.num_classes);
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);
  const std::size_t batch = static_cast<std::size_t>(config.batch_pixels);
  double bias1 = 1.0;
  double bias2 = 1.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t count = std::min(batch, order.size() - start);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      AccumulateGradient(params, features.data(), targets.data(),
                         order.data() + start, count, grad_w, grad_b, work);
      const double scale = 1.0 / static_cast<double>(count);
      for (auto& g : grad_w) g *= scale;
      for (auto& g : grad_b) g *= scale;
      bias1 *= kAdamBeta1;
      bias2 *= kAdamBeta2;
      adam_w.Step(params.weights, grad_w, config.learning_rate, 1.0 - bias1, 1.0 - bias2);
      adam_b.Step(params.bias, grad_b, config.learning_rate, 1.0 - bias1, 1.0 - bias2);
    }
  }
  params.epochs_trained = config.epochs;
  return params;
}

void Softmax(std::span<const double> logits, std::span<double> probs) {
  if (logits.size() != probs.size() || logits.empty()) {
    throw Error(ErrorCode::kShape, "softmax input/output size mismatch");
  }
  std::copy(logits.begin(), logits.end(), probs.begin());
  SoftmaxInPlace(probs.data(), static_cast<int>(probs.size()));
}

std::vector<double> LogitGradient(std::span<const double> logits, int target) {
  if (target < 0 || static_cast<std::size_t>(target) >= logits.size()) {
    throw Error(ErrorCode::kInvalidArgument, "target outside logit range");
  }
  std::vector<double> grad(logits.size());
  Softmax(logits, grad);
  grad[target] -= 1.0;
  return grad;
}

BatchGradient ComputeBatchGradient(const ClassifierParams& params,
                                   std::span<const double> features,
                                   std::span<const int> targets) {
  params.Validate();
  const auto d = static_cast<std::size_t>(params.feature_dim);
  if (targets.empty() || features.size() != targets.size() * d) {
    throw Error(ErrorCode::kShape, "batch features do not match targets");
  }
  for (int t : targets) {
    if (t < 0 || t >= params.num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "target outside class range");
    }
  }
  BatchGradient out;
  out.weights.assign(params.weights.size(), 0.0);
  out.bias.assign(params.bias.size(), 0.0);
  std::vector<double> work(params.num_classes);
  out.loss = AccumulateGradient(params, features.data(), targets.data(), nullptr,
                                targets.size(), out.weights, out.bias, work);
  const double scale = 1.0 / static_cast<double>(targets.size());
  out.loss *= scale;
  for (auto& g : out.weights) g *= scale;
  for (auto& g : out.bias) g *= scale;
  return out;
}

double CrossEntropyLoss(const ProbRaster& probs, const LabelRaster& truth,
                        ClassId ignore_index) {
  if (probs.width() != truth.width() || probs.height() != truth.height()) {
    throw Error(ErrorCode::kShape, "probabilities and truth differ in size");
  }
  const auto labels = truth.data();
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] == ignore_index.index()) continue;
    if (labels[p] == 0 || labels[p] > probs.num_classes()) {
      throw Error(ErrorCode::kInvalidClass, "truth class " +
                                                std::to_string(labels[p]) +
                                                " has no probability plane");
    }
    total -= std::log(std::max<double>(probs.at(labels[p] - 1, p), kProbabilityFloor));
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

ProbRaster PredictProbs(const ClassifierParams& params, const RgbImage& rgb) {
  CheckFeatureLayout(params);
  const FeatureRaster fr = ExtractFeatures(rgb);
  const std::size_t pixels = static_cast<std::size_t>(rgb.width()) * rgb.height();
  const int k = params.num_classes;
  std::vector<float> out(pixels * k);
  std::vector<double> work(k);
  for (std::size_t p = 0; p < pixels; ++p) {
    Logits(params, fr.pixel(p).data(), work.data());
    SoftmaxInPlace(work.data(), k);
    for (int c = 0; c < k; ++c) out[c * pixels + p] = static_cast<float>(work[c]);
  }
  return ProbRaster(rgb.width(), rgb.height(), k, std::move(out));
}

ProbRaster PredictProbs(const ClassifierParams& params, const Chip& chip) {
  return PredictProbs(params, chip.rgb);
}

LabelRaster ArgmaxLabels(const ProbRaster& probs) {
  if (probs.num_classes() > kNumClasses) {
    throw Error(ErrorCode::kShape, "more probability planes than label classes");
  }
  const std::size_t pixels = probs.pixel_count();
  std::vector<std::uint8_t> labels(pixels);
  for (std::size_t p = 0; p < pixels; ++p) {
    int best = 0;
    float best_value = probs.at(0, p);
    for (int c = 1; c < probs.num_classes(); ++c) {
      if (probs.at(c, p) > best_value) {
        best = c;
        best_value = probs.at(c, p);
      }
    }
    labels[p] = static_cast<std::uint8_t>(best + 1);
  }
  return LabelRaster(probs.width(), probs.height(), std::move(labels));
}

ProbabilityBlender::ProbabilityBlender(int width, int height, int num_classes)
    : width_(width),
      height_(height),
      num_classes_(num_classes),
      sums_(static_cast<std::size_t>(width) * height * num_classes, 0.0),
      counts_(static_cast<std::size_t>(width) * height, 0) {}

void ProbabilityBlender::Add(ChipOffset offset, const ProbRaster& chip) {
  if (chip.num_classes() != num_classes_ || offset.col < 0 || offset.row < 0 ||
      offset.col + chip.width() > width_ || offset.row + chip.height() > height_) {
    throw Error(ErrorCode::kShape, "chip probabilities do not fit the canvas");
  }
  const std::size_t canvas = static_cast<std::size_t>(width_) * height_;
  for (int r = 0; r < chip.height(); ++r) {
    for (int c = 0; c < chip.width(); ++c) {
      const std::size_t src = static_cast<std::size_t>(r) * chip.width() + c;
      const std::size_t dst =
          static_cast<std::size_t>(offset.row + r) * width_ + offset.col + c;
      for (int k = 0; k < num_classes_; ++k) sums_[k * canvas + dst] += chip.at(k, src);
      ++counts_[dst];
    }
  }
}

ProbRaster ProbabilityBlender::Finish() const {
  const std::size_t canvas = static_cast<std::size_t>(width_) * height_;
  std::vector<float> out(sums_.size());
  for (std::size_t p = 0; p < canvas; ++p) {
    if (counts_[p] == 0) {
      throw Error(ErrorCode::kInvalidArgument, "pixel without chip coverage");
    }
    for (int k = 0; k < num_classes_; ++k) {
      out[k * canvas + p] = static_cast<float>(sums_[k * canvas + p] / counts_[p]);
    }
  }
  return ProbRaster(width_, height_, num_classes_, std::move(out));
}

ProbRaster PredictRaster(const ClassifierParams& params, const RgbImage& raster,
                         int chip_size, int stride) {
  const auto cols = tiles::WindowStarts(raster.width(), chip_size, stride);
  const auto rows = tiles::WindowStarts(raster.height(), chip_size, stride);
  ProbabilityBlender blender(raster.width(), raster.height(), params.num_classes);
  for (int row : rows) {
    for (int col : cols) {
      blender.Add({col, row},
                  PredictProbs(params, raster.Crop(col, row, chip_size, chip_size)));
    }
  }
  return blender.Finish();
}

std::vector<ExternalProbEntry> ParseExternalManifest(
    std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<ExternalProbEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string id;
    std::string path;
    std::string extra;
    if (!(fields >> id)) continue;
    if (!(fields >> path) || (fields >> extra)) {
      throw Error(ErrorCode::kParse, "manifest line " + std::to_string(line_number) +
                                         ": expected 'chip_id oemp_path'");
    }
    entries.push_back({id, ResolvePath(base_dir, path)});
  }
  return entries;
}

std::vector<ExternalProbEntry> ReadExternalManifest(const std::filesystem::path& path) {
  return ParseExternalManifest(ReadTextFile(path), path.parent_path());
}

std::string ExternalManifestToText(std::span<const ExternalProbEntry> entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.chip_id + " " + e.oemp_path.generic_string() + "\n";
  }
  return out;
}

ProbRaster LoadExternalProbs(const ExternalProbEntry& entry, int expected_width,
                             int expected_height) {
  if (!std::filesystem::exists(entry.oemp_path)) {
    throw Error(ErrorCode::kMissingFile, "probability file for chip " +
                                             entry.chip_id + " not found: " +
                                             entry.oemp_path.string());
  }
  ProbRaster probs = DecodeProbRaster(ReadFileBytes(entry.oemp_path));
  if (probs.width() != expected_width || probs.height() != expected_height) {
    throw Error(ErrorCode::kShape,
                "probabilities for chip " + entry.chip_id + " are " +
                    std::to_string(probs.width()) + "x" +
                    std::to_string(probs.height()) + ", chip is " +
                    std::to_string(expected_width) + "x" +
                    std::to_string(expected_height));
  }
  return probs;
}

std::string ParamsToJson(const ClassifierParams& params) {
  params.Validate();
  nlohmann::json doc = {
      {"format", kParamsFormat},
      {"version", kParamsVersion},
      {"feature_dim", params.feature_dim},
      {"num_classes", params.num_classes},
      {"seed", params.seed},
      {"epochs_trained", params.epochs_trained},
      {"weights", params.weights},
      {"bias", params.bias},
  };
  return doc.dump(1) + "\n";
}

ClassifierParams ParamsFromJson(std::string_view text) {
  ClassifierParams p;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != kParamsFormat ||
        doc.at("version").get<int>() != kParamsVersion) {
      throw Error(ErrorCode::kFormat, "not a version-1 classifier parameter file");
    }
    p.feature_dim = doc.at("feature_dim").get<int>();
    p.num_classes = doc.at("num_classes").get<int>();
    p.seed = doc.at("seed").get<std::uint64_t>();
    p.epochs_trained = doc.at("epochs_trained").get<int>();
    p.weights = doc.at("weights").get<std::vector<double>>();
    p.bias = doc.at("bias").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("classifier params: ") + e.what());
  }
  p.Validate();
  return p;
}

void SaveParams(const std::filesystem::path& path, const ClassifierParams& params) {
  WriteTextFile(path, ParamsToJson(params));
}

ClassifierParams LoadParams(const std::filesystem::path& path) {
  return ParamsFromJson(ReadTextFile(path));
}

}  // namespace landcover::model
