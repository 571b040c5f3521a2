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

#include "landcover/review_service.h"

#include <charconv>
#include <limits>

#include "httplib.h"
#include "json.hpp"
#include "landcover/error.h"
#include "landcover/io.h"
#include "landcover/png_codec.h"

namespace landcover::service {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kDefaultPageLimit = 100;

ordered_json CandidateJson(const select::Candidate& c) {
  ordered_json j;
  j["chip_id"] = c.chip_id;
  j["cell_id"] = c.cell_id;
  j["entropy"] = c.entropy;
  j["decision"] = select::DecisionName(c.decision);
  j["source"] = select::SourceName(c.source);
  j["rgb_path"] = c.rgb_path;
  return j;
}

Response JsonResponse(const ordered_json& body, int status = 200) {
  Response r;
  r.status = status;
  r.body = body.dump() + "\n";
  return r;
}

std::optional<std::int64_t> ParseInt(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::size_t ParseCount(const std::map<std::string, std::string>& query, const char* key,
                       std::size_t fallback) {
  const auto it = query.find(key);
  if (it == query.end()) return fallback;
  const auto v = ParseInt(it->second);
  if (!v || *v < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(key) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(*v);
}

Response PngResponse(std::vector<std::uint8_t> bytes, bool empty) {
  Response r;
  r.content_type = "image/png";
  r.body.assign(bytes.begin(), bytes.end());
  r.headers[kTileStatusHeader] = empty ? "empty" : "ok";
  return r;
}

std::optional<std::vector<std::uint8_t>> ReadTile(
    const std::map<std::string, std::filesystem::path>& roots, const std::string& layer,
    const tiles::TileAddress& tile) {
  const auto it = roots.find(layer);
  if (it == roots.end()) return std::nullopt;
  const auto path = tiles::TilePath(it->second, tile);
  if (!std::filesystem::exists(path)) return std::nullopt;
  return ReadFileBytes(path);
}

}  // namespace

ServiceConfig ServiceConfig::FromJson(std::string_view text,
                                      const std::filesystem::path& base_dir) {
  ServiceConfig config;
  try {
    const auto doc = json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::kParse, "service config must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "pyramid_roots") {
        for (const auto& [layer, root] : value.items()) {
          config.pyramid_roots[layer] = ResolvePath(base_dir, root.get<std::string>());
        }
      } else if (key == "opacity") {
        config.opacity = value.get<double>();
      } else if (key == "listen_address") {
        config.listen_address = value.get<std::string>();
      } else if (key == "log_path") {
        config.log_path = ResolvePath(base_dir, value.get<std::string>());
      } else if (key == "selection_report") {
        config.selection_report = ResolvePath(base_dir, value.get<std::string>());
      } else if (key == "tile_size") {
        config.tile_size = value.get<int>();
      } else {
        throw Error(ErrorCode::kParse, "unknown service config key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("service config: ") + e.what());
  }
  if (!(config.opacity >= 0.0 && config.opacity <= 1.0)) {
    throw Error(ErrorCode::kRange, "opacity must lie in [0, 1]");
  }
  if (config.tile_size < 1) throw Error(ErrorCode::kRange, "tile_size must be >= 1");
  return config;
}

ServiceConfig ServiceConfig::Load(const std::filesystem::path& path) {
  return FromJson(ReadTextFile(path), path.parent_path());
}

std::string CandidateToJson(const select::Candidate& candidate) {
  return CandidateJson(candidate).dump();
}

Response ErrorResponse(int status, std::string_view code, std::string_view message) {
  ordered_json j;
  j["code"] = code;
  j["message"] = message;
  return JsonResponse(j, status);
}

int StatusForError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kMissingFile:
      return 404;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

ReviewService::ReviewService(ServiceConfig config, std::unique_ptr<ReviewStore> store)
    : config_(std::move(config)), store_(std::move(store)) {}

std::unique_ptr<ReviewService> ReviewService::Open(const ServiceConfig& config,
                                                   Clock clock) {
  std::vector<select::Candidate> candidates;
  if (!config.selection_report.empty()) {
    candidates = select::SelectionReportFromJson(ReadTextFile(config.selection_report));
  }
  auto store = std::make_unique<ReviewStore>(std::move(candidates), config.log_path,
                                             std::move(clock));
  return std::make_unique<ReviewService>(config, std::move(store));
}

Response ReviewService::Handle(const Request& request) {
  try {
    const std::string& path = request.path;
    if (path == "/api/candidates") {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", path);
      return ListCandidates(request);
    }
    if (path == "/api/decisions") {
      if (request.method != "POST") return ErrorResponse(405, "method_not_allowed", path);
      return PostDecision(request);
    }
    if (path == "/api/export/annotations") {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", path);
      Response r;
      r.body = store_->ExportAnnotationManifest();
      return r;
    }
    constexpr std::string_view kTilePrefix = "/tiles/";
    if (path.rfind(kTilePrefix, 0) == 0) {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", path);
      return TileRequest(std::string_view(path).substr(kTilePrefix.size()));
    }
    return ErrorResponse(404, "not_found", "no route for " + path);
  } catch (const Error& e) {
    return ErrorResponse(StatusForError(e.code()), ErrorCodeName(e.code()), e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, "internal", e.what());
  }
}

Response ReviewService::ListCandidates(const Request& request) const {
  CandidateFilter filter;
  for (const auto& [key, value] : request.query) {
    if (key == "state") {
      const auto d = select::ParseDecision(value);
      if (!d) throw Error(ErrorCode::kInvalidArgument, "unknown state " + value);
      filter.state = d;
    } else if (key == "cell") {
      filter.cell = value;
    } else if (key != "offset" && key != "limit") {
      throw Error(ErrorCode::kInvalidArgument, "unknown filter key " + key);
    }
  }
  const std::size_t offset = ParseCount(request.query, "offset", 0);
  const std::size_t limit = ParseCount(request.query, "limit", kDefaultPageLimit);
  const CandidatePage page = store_->List(filter, offset, limit);
  ordered_json j;
  j["total"] = page.total;
  j["offset"] = offset;
  j["limit"] = limit;
  j["candidates"] = ordered_json::array();
  for (const auto& c : page.items) j["candidates"].push_back(CandidateJson(c));
  return JsonResponse(j);
}

Response ReviewService::PostDecision(const Request& request) {
  std::string candidate_id;
  std::string decision_text;
  std::string annotator;
  try {
    const auto body = json::parse(request.body);
    candidate_id = body.at("candidate_id").get<std::string>();
    decision_text = body.at("decision").get<std::string>();
    annotator = body.at("annotator").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed decision: ") + e.what());
  }
  const auto decision = select::ParseDecision(decision_text);
  if (!decision || *decision == select::Decision::kPending) {
    throw Error(ErrorCode::kInvalidArgument, "invalid decision " + decision_text);
  }
  const DecisionRecord record = store_->Record(candidate_id, *decision, annotator);
  ordered_json j;
  j["candidate_id"] = record.candidate_id;
  j["decision"] = select::DecisionName(record.decision);
  j["revision"] = record.revision;
  j["timestamp"] = record.timestamp;
  return JsonResponse(j);
}

Response ReviewService::TileRequest(std::string_view rest) const {
  // rest = "{layer}/{z}/{x}/{y}.png"
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t slash = rest.find('/', start);
    parts.push_back(rest.substr(start, slash == std::string_view::npos ? rest.npos
                                                                      : slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  constexpr std::string_view kSuffix = ".png";
  if (parts.size() != 4 || parts[3].size() <= kSuffix.size() ||
      parts[3].substr(parts[3].size() - kSuffix.size()) != kSuffix) {
    throw Error(ErrorCode::kInvalidArgument, "tile path must be {layer}/{z}/{x}/{y}.png");
  }
  const auto z = ParseInt(parts[1]);
  const auto x = ParseInt(parts[2]);
  const auto y = ParseInt(parts[3].substr(0, parts[3].size() - kSuffix.size()));
  if (!z || !x || !y || *z < 0 || *z > tiles::kMaxZoom) {
    throw Error(ErrorCode::kRange, "invalid tile address");
  }
  return ServeTile(parts[0], static_cast<int>(*z), *x, *y);
}

Response ReviewService::ServeTile(std::string_view layer, int z, std::int64_t x,
                                  std::int64_t y) const {
  const std::string name(layer);
  if (name != "imagery" && name != "prediction" && name != "composite") {
    throw Error(ErrorCode::kNotFound, "unknown tile layer " + name);
  }
  const tiles::TileAddress tile = tiles::TileAddress::Make(z, x, y);
  auto empty = [&] {
    return PngResponse(EncodeTransparentPng(config_.tile_size, config_.tile_size), true);
  };
  if (name != "composite") {
    auto bytes = ReadTile(config_.pyramid_roots, name, tile);
    return bytes ? PngResponse(std::move(*bytes), false) : empty();
  }
  const auto imagery = ReadTile(config_.pyramid_roots, "imagery", tile);
  const auto prediction = ReadTile(config_.pyramid_roots, "prediction", tile);
  if (!imagery && !prediction) return empty();
  if (!prediction) return PngResponse(*imagery, false);
  const RgbImage overlay = DecodeRgbPng(*prediction);
  const RgbImage base = imagery ? DecodeRgbPng(*imagery)
                                : RgbImage(overlay.width(), overlay.height());
  return PngResponse(EncodeRgbPng(tiles::CompositeOverlay(base, overlay, config_.opacity)),
                     false);
}

void Serve(ReviewService& service) {
  const std::string& address = service.config().listen_address;
  const std::size_t colon = address.rfind(':');
  const auto port = colon == std::string::npos
                        ? std::nullopt
                        : ParseInt(std::string_view(address).substr(colon + 1));
  if (!port || *port < 0 || *port > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "listen_address must be host:port");
  }
  httplib::Server server;
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    Request request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query[key] = value;
    request.body = req.body;
    const Response response = service.Handle(request);
    res.status = response.status;
    for (const auto& [key, value] : response.headers) res.set_header(key, value);
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(response.body, response.content_type);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });
  if (!server.listen(address.substr(0, colon), static_cast<int>(*port))) {
    throw Error(ErrorCode::kIo, "cannot listen on " + address);
  }
}

}  // namespace landcover::service
