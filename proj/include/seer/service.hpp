#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "seer/bundle.hpp"
#include "seer/corpus.hpp"
#include "seer/json_util.hpp"

namespace seer {

using QueryParams = std::multimap<std::string, std::string>;

struct ApiResponse {
  int status = 200;
  json body;
};

/// Read-only request handlers over one immutable bundle. Every handler is a
/// pure function of the bundle and its arguments, so it is safe to call from
/// concurrent request threads.
class AnalysisService {
 public:
  explicit AnalysisService(AnalysisBundle bundle);

  const AnalysisBundle& bundle() const { return bundle_; }

  ApiResponse meta() const;
  ApiResponse fsm() const;
  ApiResponse state(std::string_view id) const;
  ApiResponse patterns(const QueryParams& params) const;
  ApiResponse instances(const QueryParams& params) const;
  ApiResponse predict(std::string_view request_body) const;

 private:
  AnalysisBundle bundle_;
  json fsm_json_;
};

/// QuerySpec from URL parameters: split, correct, prediction, label, state,
/// pattern (comma-separated states), max_gap, q, regex, sort, dir, page,
/// page_size. Throws BadQuery on unknown or malformed parameters.
QuerySpec parse_query_spec(const QueryParams& params);

/// Tokens, states, intermediate probability rows and labels for one text,
/// plus the bundle's patterns that occur in its trace.
json predict_payload(const AnalysisBundle& bundle, std::string_view text);

json error_body(std::string_view error, std::string_view detail);

/// HTTP front end: GET /api/meta, /api/fsm, /api/states/{id}, /api/patterns,
/// /api/instances and POST /api/predict. Static UI assets are served from
/// `ui_dir` under / when it exists.
class HttpServer {
 public:
  HttpServer(const AnalysisService& service, std::filesystem::path ui_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds an ephemeral port and returns it (or -1).
  int bind_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace seer
