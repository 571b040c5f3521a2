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

// Command-line front end. Every subcommand prints a JSON document on stdout.
// Exit codes: 0 success, 1 operation failure, 2 usage error.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/loop.h"
#include "landcover/manifest.h"
#include "landcover/metrics.h"
#include "landcover/model.h"
#include "landcover/oemp_codec.h"
#include "landcover/png_codec.h"
#include "landcover/refeval.h"
#include "landcover/review_service.h"
#include "landcover/select.h"
#include "landcover/synth.h"
#include "landcover/tiles.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace landcover;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

GeoTransform ParseGeo(const std::vector<double>& v) {
  return GeoTransform(v.at(0), v.at(1), v.at(2), v.at(3));
}

void Print(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }
void PrintRaw(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << "\n";
}

struct Common {
  std::uint64_t seed = 0;
};

CLI::App* AddSubcommand(CLI::App& app, const std::string& name, const std::string& help,
                        Common& common, bool option_config = true) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  if (option_config) {
    sub->set_config("--config", "", "TOML/INI file supplying option defaults");
  }
  return sub;
}

std::vector<model::LabeledImage> LoadLabeledSet(const fs::path& manifest_path) {
  const fs::path base = manifest_path.parent_path();
  const ChipManifest manifest = ReadChipManifest(manifest_path);
  std::vector<model::LabeledImage> images;
  for (const auto& c : manifest.chips) {
    if (c.label_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "chip " + c.chip_id + " has no label_path");
    }
    images.push_back({DecodeRgbPng(ReadFileBytes(ResolvePath(base, c.rgb_path))),
                      DecodeLabelPng(ReadFileBytes(ResolvePath(base, c.label_path)))});
  }
  return images;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-in-the-loop land-cover mapping toolkit"};
  app.require_subcommand(1);
  Common common;

  // synth-world
  synth::WorldConfig world;
  std::string world_out;
  bool no_state = false;
  auto* synth_cmd = AddSubcommand(app, "synth-world",
                                  "Generate a synthetic world and initialise loop state",
                                  common);
  synth_cmd->add_option("--out", world_out, "World root directory")->required();
  synth_cmd->add_option("--cells", world.n_cells, "Number of geographic cells")
      ->capture_default_str();
  synth_cmd->add_option("--chips-per-cell", world.chips_per_cell)->capture_default_str();
  synth_cmd->add_option("--shift-fraction", world.shift_fraction)->capture_default_str();
  synth_cmd->add_option("--chip-size", world.chip_size)->capture_default_str();
  synth_cmd->add_flag("--no-state", no_state, "Skip writing split manifests");

  // train
  std::string train_manifest, model_out;
  model::TrainConfig train_cfg{30, 0.05, 256, 0};
  auto* train_cmd = AddSubcommand(app, "train", "Train the pixel classifier", common);
  train_cmd->add_option("--labeled", train_manifest, "Labeled chip manifest")->required();
  train_cmd->add_option("--out", model_out, "Output model file")->required();
  train_cmd->add_option("--epochs", train_cfg.epochs)->capture_default_str();
  train_cmd->add_option("--learning-rate", train_cfg.learning_rate)->capture_default_str();
  train_cmd->add_option("--batch-pixels", train_cfg.batch_pixels)->capture_default_str();

  // predict
  std::string predict_model, predict_rgb, predict_labels, predict_probs;
  int predict_chip = 0, predict_stride = 0;
  auto* predict_cmd = AddSubcommand(app, "predict", "Predict a label raster", common);
  predict_cmd->add_option("--model", predict_model)->required();
  predict_cmd->add_option("--rgb", predict_rgb, "Input RGB PNG")->required();
  predict_cmd->add_option("--out-labels", predict_labels, "Output indexed label PNG");
  predict_cmd->add_option("--out-probs", predict_probs, "Output probability raster");
  predict_cmd->add_option("--chip-size", predict_chip, "Sliding-window size (0 = whole image)");
  predict_cmd->add_option("--stride", predict_stride, "Sliding-window stride (0 = chip size)");

  // select
  std::string select_unlabeled, select_model, select_probs, select_out;
  int select_k = select::kDefaultCandidatesPerCell;
  auto* select_cmd = AddSubcommand(app, "select", "Score and select review candidates", common);
  select_cmd->add_option("--unlabeled", select_unlabeled, "Unlabeled chip manifest")
      ->required();
  auto* model_opt = select_cmd->add_option("--model", select_model, "Model file");
  auto* probs_opt = select_cmd->add_option(
      "--probs", select_probs, "External probability manifest (chip_id path per line)");
  model_opt->excludes(probs_opt);
  select_cmd->add_option("--k", select_k, "Candidates per cell")->capture_default_str();
  select_cmd->add_option("--out", select_out, "Write the selection report here");

  // evaluate
  std::string eval_pred, eval_truth, eval_remap, eval_csv, eval_format = "json";
  auto* eval_cmd = AddSubcommand(app, "evaluate", "Accuracy assessment", common);
  eval_cmd->add_option("--pred", eval_pred, "Predicted label PNG")->required();
  eval_cmd->add_option("--truth", eval_truth, "Reference label PNG")->required();
  eval_cmd->add_option("--remap", eval_remap, "Class remap rule applied to both rasters");
  eval_cmd->add_option("--confusion-csv", eval_csv, "Write the row-normalized matrix");
  eval_cmd->add_option("--format", eval_format)
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  // ref-eval
  std::string ref_pred, ref_footprints, ref_role = "building", ref_error_map;
  std::vector<double> ref_geo;
  std::optional<double> ref_min_area;
  auto* ref_cmd = AddSubcommand(app, "ref-eval", "Footprint reference evaluation", common);
  ref_cmd->add_option("--pred", ref_pred, "Predicted label PNG")->required();
  ref_cmd->add_option("--footprints", ref_footprints, "GeoJSON polygons")->required();
  ref_cmd->add_option("--role", ref_role)
      ->check(CLI::IsMember({"building", "agriculture"}))
      ->capture_default_str();
  ref_cmd->add_option("--geo", ref_geo, "origin_lon,origin_lat,pixel_x,pixel_y")
      ->required()
      ->expected(4)
      ->delimiter(',');
  ref_cmd->add_option("--min-area", ref_min_area, "Minimum polygon area in m^2");
  ref_cmd->add_option("--error-map", ref_error_map, "Write the colored error map PNG");

  // tiles
  std::string tiles_labels, tiles_rgb, tiles_out;
  std::vector<double> tiles_geo;
  tiles::ZoomRange zooms{10, 12};
  int tile_size = tiles::kDefaultTileSize;
  double tiles_opacity = tiles::kDefaultOverlayOpacity;
  auto* tiles_cmd = AddSubcommand(app, "tiles", "Build XYZ tile pyramids", common);
  tiles_cmd->add_option("--labels", tiles_labels, "Label PNG (prediction layer)");
  tiles_cmd->add_option("--rgb", tiles_rgb, "RGB PNG (imagery layer)");
  tiles_cmd->add_option("--geo", tiles_geo, "origin_lon,origin_lat,pixel_x,pixel_y")
      ->required()
      ->expected(4)
      ->delimiter(',');
  tiles_cmd->add_option("--out", tiles_out, "Output root")->required();
  tiles_cmd->add_option("--zmin", zooms.min)->capture_default_str();
  tiles_cmd->add_option("--zmax", zooms.max)->capture_default_str();
  tiles_cmd->add_option("--tile-size", tile_size)->capture_default_str();
  tiles_cmd->add_option("--opacity", tiles_opacity, "Label opacity of the composite layer")
      ->capture_default_str();

  // serve
  std::string serve_config, serve_listen;
  auto* serve_cmd = AddSubcommand(app, "serve", "Run the review service", common, false);
  serve_cmd->add_option("--config", serve_config, "JSON service config")->required();
  serve_cmd->add_option("--listen", serve_listen, "Override listen_address (host:port)");

  // loop
  std::string loop_state, loop_world;
  int loop_iterations = 2;
  bool scripted = false;
  loop::LoopConfig loop_cfg;
  auto* loop_cmd = AddSubcommand(app, "loop", "Run train/map/triage/retrain iterations", common);
  loop_cmd->add_option("--state", loop_state, "Loop state directory")->required();
  loop_cmd->add_option("--iterations", loop_iterations)->capture_default_str();
  loop_cmd->add_flag("--scripted-reviewer", scripted,
                     "Mark shifted candidates as failures using generator truth");
  loop_cmd->add_option("--world", loop_world, "World root for the scripted reviewer "
                                              "(default: the state directory)");
  loop_cmd->add_option("--epochs", loop_cfg.train.epochs)->capture_default_str();
  loop_cmd->add_option("--k", loop_cfg.candidates_per_cell)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) {
      world.seed = common.seed;
      const synth::World w = synth::GenerateWorld(world);
      const auto entries = synth::WriteWorld(w, world_out);
      std::size_t shifted = 0;
      for (const auto& e : entries) shifted += e.tag == synth::ChipTag::kShifted;
      if (!no_state) loop::InitStateFromWorld(world_out, world_out, common.seed);
      ordered_json j;
      j["root"] = world_out;
      j["chips"] = entries.size();
      j["shifted"] = shifted;
      j["cells"] = world.n_cells;
      j["seed"] = common.seed;
      Print(j);
    } else if (train_cmd->parsed()) {
      train_cfg.seed = common.seed;
      const auto images = LoadLabeledSet(train_manifest);
      const auto params = model::TrainClassifier(images, train_cfg);
      model::SaveParams(model_out, params);
      ordered_json j;
      j["model"] = model_out;
      j["train_chips"] = images.size();
      j["epochs_trained"] = params.epochs_trained;
      j["seed"] = params.seed;
      Print(j);
    } else if (predict_cmd->parsed()) {
      const auto params = model::LoadParams(predict_model);
      const RgbImage rgb = DecodeRgbPng(ReadFileBytes(predict_rgb));
      const ProbRaster probs =
          predict_chip > 0
              ? model::PredictRaster(params, rgb, predict_chip,
                                     predict_stride > 0 ? predict_stride : predict_chip)
              : model::PredictProbs(params, rgb);
      if (!predict_labels.empty()) {
        WriteFileBytes(predict_labels, EncodeLabelPng(model::ArgmaxLabels(probs)));
      }
      if (!predict_probs.empty()) WriteFileBytes(predict_probs, EncodeProbRaster(probs));
      ordered_json j;
      j["width"] = probs.width();
      j["height"] = probs.height();
      j["entropy"] = select::ChipEntropy(probs);
      if (!predict_labels.empty()) j["labels"] = predict_labels;
      if (!predict_probs.empty()) j["probs"] = predict_probs;
      Print(j);
    } else if (select_cmd->parsed()) {
      if (select_model.empty() && select_probs.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "one of --model or --probs is required");
      }
      const fs::path base = fs::path(select_unlabeled).parent_path();
      const ChipManifest unlabeled = ReadChipManifest(select_unlabeled);
      std::optional<model::ClassifierParams> params;
      std::map<std::string, model::ExternalProbEntry> external;
      if (!select_model.empty()) {
        params = model::LoadParams(select_model);
      } else {
        for (auto& e : model::ReadExternalManifest(select_probs)) external[e.chip_id] = e;
      }
      std::vector<select::Candidate> scored;
      for (const auto& c : unlabeled.chips) {
        const RgbImage rgb = DecodeRgbPng(ReadFileBytes(ResolvePath(base, c.rgb_path)));
        ProbRaster probs;
        if (params) {
          probs = model::PredictProbs(*params, rgb);
        } else {
          const auto it = external.find(c.chip_id);
          if (it == external.end()) {
            throw Error(ErrorCode::kNotFound, "no probabilities for chip " + c.chip_id);
          }
          probs = model::LoadExternalProbs(it->second, rgb.width(), rgb.height());
        }
        select::Candidate candidate;
        candidate.chip_id = c.chip_id;
        candidate.cell_id = c.cell_id;
        candidate.entropy = select::ChipEntropy(probs);
        candidate.rgb_path = c.rgb_path;
        scored.push_back(std::move(candidate));
      }
      const std::string report =
          select::SelectionReportToJson(select::StratifiedTopK(std::move(scored), select_k));
      if (!select_out.empty()) WriteTextFile(select_out, report);
      PrintRaw(report);
    } else if (eval_cmd->parsed()) {
      LabelRaster pred = DecodeLabelPng(ReadFileBytes(eval_pred));
      LabelRaster truth = DecodeLabelPng(ReadFileBytes(eval_truth));
      if (!eval_remap.empty()) {
        const auto rule = select::RemapRule::Parse(ReadTextFile(eval_remap));
        pred = select::ApplyClassRemap(pred, rule);
        truth = select::ApplyClassRemap(truth, rule);
      }
      const auto cm = metrics::AccumulateConfusion(pred, truth);
      const auto report = metrics::ComputeMetrics(cm);
      if (!eval_csv.empty()) WriteTextFile(eval_csv, metrics::NormalizedConfusionCsv(cm));
      PrintRaw(eval_format == "table" ? metrics::FormatMetricsTable(report)
                                      : metrics::MetricsReportToJson(report, &cm));
    } else if (ref_cmd->parsed()) {
      const auto role = *refeval::ParseRole(ref_role);
      const LabelRaster pred = DecodeLabelPng(ReadFileBytes(ref_pred));
      auto footprints = refeval::ParseFootprints(ReadTextFile(ref_footprints), role);
      const double min_area = ref_min_area.value_or(refeval::kDefaultMinAreaSqm);
      footprints = refeval::FilterMinArea(footprints, min_area);
      const auto raster = refeval::RasterizePolygons(footprints, ParseGeo(ref_geo),
                                                     pred.width(), pred.height());
      const auto evaluation = refeval::EvaluateBinary(pred, refeval::RoleClass(role),
                                                      raster.mask);
      if (!ref_error_map.empty()) {
        WriteFileBytes(ref_error_map,
                       EncodeRgbPng(metrics::RenderErrorMap(evaluation.errors)));
      }
      auto j = ordered_json::parse(refeval::BinaryEvaluationToJson(evaluation, role));
      j["polygons"] = footprints.polygons.size();
      j["min_area_sqm"] = min_area;
      j["degenerate_rings_skipped"] = raster.degenerate_rings_skipped;
      Print(j);
    } else if (tiles_cmd->parsed()) {
      if (tiles_labels.empty() && tiles_rgb.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "one of --labels or --rgb is required");
      }
      const GeoTransform geo = ParseGeo(tiles_geo);
      const fs::path root = tiles_out;
      ordered_json counts;
      std::optional<tiles::Pyramid> prediction, imagery;
      if (!tiles_labels.empty()) {
        LabelRaster labels = DecodeLabelPng(ReadFileBytes(tiles_labels));
        labels.set_geo(geo);
        prediction = tiles::BuildPyramid(labels, zooms, tile_size);
        tiles::WritePyramid(root / "prediction", *prediction);
        counts["prediction"] = prediction->size();
      }
      if (!tiles_rgb.empty()) {
        imagery = tiles::BuildImageryPyramid(DecodeRgbPng(ReadFileBytes(tiles_rgb)), geo,
                                             zooms, tile_size);
        tiles::WritePyramid(root / "imagery", *imagery);
        counts["imagery"] = imagery->size();
      }
      if (prediction && imagery) {
        tiles::Pyramid composite;
        for (const auto& [tile, bytes] : *imagery) {
          const auto it = prediction->find(tile);
          if (it == prediction->end()) {
            composite[tile] = bytes;
            continue;
          }
          composite[tile] = EncodeRgbPng(tiles::CompositeOverlay(
              DecodeRgbPng(bytes), DecodeRgbPng(it->second), tiles_opacity));
        }
        tiles::WritePyramid(root / "composite", composite);
        counts["composite"] = composite.size();
      }
      ordered_json j;
      j["root"] = tiles_out;
      j["zmin"] = zooms.min;
      j["zmax"] = zooms.max;
      j["tile_size"] = tile_size;
      j["opacity"] = tiles_opacity;
      j["tiles"] = counts;
      Print(j);
    } else if (serve_cmd->parsed()) {
      auto config = service::ServiceConfig::Load(serve_config);
      if (!serve_listen.empty()) config.listen_address = serve_listen;
      auto service = service::ReviewService::Open(config);
      ordered_json j;
      j["listening"] = config.listen_address;
      j["candidates"] = service->store().Snapshot().size();
      j["log_records"] = service->store().Log().size();
      Print(j);
      std::cout.flush();
      service::Serve(*service);
    } else if (loop_cmd->parsed()) {
      loop_cfg.train.seed = common.seed;
      fs::path world_root;
      if (scripted) world_root = loop_world.empty() ? loop_state : loop_world;
      const auto reports = loop::RunLoop(loop_state, loop_cfg, loop_iterations, world_root);
      ordered_json j = ordered_json::array();
      for (const auto& r : reports) {
        j.push_back(ordered_json::parse(loop::IterationReportToJson(r)));
      }
      Print(j);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
