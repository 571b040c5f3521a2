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

#ifndef LANDCOVER_REVIEW_SERVICE_H_
#define LANDCOVER_REVIEW_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "landcover/error.h"
#include "landcover/review_store.h"
#include "landcover/tiles.h"

namespace landcover::service {

struct ServiceConfig {
  // Layer name ("imagery", "prediction") -> pyramid root directory.
  std::map<std::string, std::filesystem::path> pyramid_roots;
  double opacity = tiles::kDefaultOverlayOpacity;
  std::string listen_address = "127.0.0.1:8080";
  std::filesystem::path log_path;
  std::filesystem::path selection_report;
  int tile_size = tiles::kDefaultTileSize;

  // Relative paths resolve against base_dir. Throws kParse on malformed
  // documents or unknown keys, kRange for opacity outside [0, 1].
  static ServiceConfig FromJson(std::string_view text,
                                const std::filesystem::path& base_dir = {});
  static ServiceConfig Load(const std::filesystem::path& path);
};

struct Request {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

inline constexpr char kTileStatusHeader[] = "X-Tile-Status";

// Transport-independent request handling; Serve() binds it to HTTP.
//   GET  /api/candidates?state=&cell=&offset=&limit=
//   POST /api/decisions          {candidate_id, decision, annotator}
//   GET  /api/export/annotations
//   GET  /tiles/{layer}/{z}/{x}/{y}.png   layer: imagery|prediction|composite
// Errors are {"code", "message"} with 400/404/405/500 statuses.
class ReviewService {
 public:
  ReviewService(ServiceConfig config, std::unique_ptr<ReviewStore> store);
  // Loads the selection report and replays the configured log.
  static std::unique_ptr<ReviewService> Open(const ServiceConfig& config,
                                             Clock clock = SystemClockSeconds);

  Response Handle(const Request& request);

  // Missing tiles yield a transparent tile flagged "empty" in
  // kTileStatusHeader; invalid addresses throw kRange.
  Response ServeTile(std::string_view layer, int z, std::int64_t x, std::int64_t y) const;

  ReviewStore& store() { return *store_; }
  const ServiceConfig& config() const { return config_; }

 private:
  Response ListCandidates(const Request& request) const;
  Response PostDecision(const Request& request);
  Response TileRequest(std::string_view rest) const;

  ServiceConfig config_;
  std::unique_ptr<ReviewStore> store_;
};

std::string CandidateToJson(const select::Candidate& candidate);
Response ErrorResponse(int status, std::string_view code, std::string_view message);
int StatusForError(ErrorCode code);

// Blocks serving HTTP on config().listen_address ("host:port").
void Serve(ReviewService& service);

}  // namespace landcover::service

#endif  // LANDCOVER_REVIEW_SERVICE_H_
