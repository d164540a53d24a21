#include "seer/service.hpp"

#include <charconv>

#include <httplib.h>

#include "seer/error.hpp"
#include "seer/model_io.hpp"
#include "seer/patterns.hpp"

namespace seer {

namespace {

int parse_int(std::string_view name, std::string_view value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::BadQuery, std::string(name) + ": '" + std::string(value) + "' is not an integer");
  }
  return out;
}

bool parse_bool(std::string_view name, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::BadQuery, std::string(name) + ": expected true or false");
}

std::vector<int> parse_int_list(std::string_view name, std::string_view value) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string_view::npos) comma = value.size();
    out.push_back(parse_int(name, value.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownState: return 404;
    case ErrorCode::BadQuery:
    case ErrorCode::EmptyInput:
    case ErrorCode::IndexOutOfVocab:
    case ErrorCode::BadK:
      return 400;
    default: return 500;
  }
}

ApiResponse failure(const Error& e) {
  return ApiResponse{status_for(e.code()), error_body(to_string(e.code()), e.detail())};
}

template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return failure(e);
  } catch (const std::exception& e) {
    return ApiResponse{500, error_body("Internal", e.what())};
  }
}

json patterns_of_kind(const std::vector<PatternEntry>& entries) {
  json arr = json::array();
  for (const PatternEntry& p : entries) arr.push_back(pattern_entry_to_json(p));
  return arr;
}

}  // namespace

json error_body(std::string_view error, std::string_view detail) {
  return json{{"error", error}, {"detail", detail}};
}

QuerySpec parse_query_spec(const QueryParams& params) {
  QuerySpec spec;
  for (const auto& [key, value] : params) {
    if (key == "split") {
      if (value != "all") spec.split = parse_split(value);
    } else if (key == "correct") {
      spec.correct = parse_bool(key, value);
    } else if (key == "prediction") {
      spec.prediction = parse_int(key, value);
    } else if (key == "label") {
      spec.human_label = parse_int(key, value);
    } else if (key == "state") {
      spec.state = parse_int(key, value);
    } else if (key == "pattern") {
      spec.pattern = parse_int_list(key, value);
    } else if (key == "max_gap") {
      spec.pattern_max_gap = parse_int(key, value);
      if (spec.pattern_max_gap < 0) throw Error(ErrorCode::BadQuery, "max_gap must be non-negative");
    } else if (key == "q") {
      if (!spec.text) spec.text = TextQuery{};
      spec.text->text = value;
    } else if (key == "regex") {
      if (!spec.text) spec.text = TextQuery{};
      spec.text->regex = parse_bool(key, value);
    } else if (key == "sort") {
      spec.sort = parse_sort_key(value);
    } else if (key == "dir") {
      if (value != "asc" && value != "desc") throw Error(ErrorCode::BadQuery, "dir must be asc or desc");
      spec.descending = value == "desc";
    } else if (key == "page") {
      spec.page = parse_int(key, value);
    } else if (key == "page_size") {
      spec.page_size = parse_int(key, value);
    } else {
      throw Error(ErrorCode::BadQuery, "unknown parameter '" + key + "'");
    }
  }
  if (spec.text && spec.text->text.empty()) throw Error(ErrorCode::BadQuery, "q must not be empty");
  return spec;
}

json predict_payload(const AnalysisBundle& bundle, std::string_view text) {
  std::vector<Vector> probs;
  const InstanceRecord rec = analyze_text(bundle.model, bundle.abstraction, text, &probs);
  json tokens = json::array();
  json word_start = json::array();
  json ids = json::array();
  for (const Token& t : rec.trace.tokens) {
    tokens.push_back(t.piece);
    word_start.push_back(t.word_start);
    ids.push_back(t.id);
  }
  json rows = json::array();
  for (const Vector& p : probs) rows.push_back(vector_to_json(p));

  const auto related = [&](const std::vector<PatternEntry>& entries, int max_gap) {
    json arr = json::array();
    for (const PatternEntry& p : entries) {
      if (auto span = first_match(rec.trace.states, p.states, max_gap)) {
        json e = pattern_entry_to_json(p);
        e["match"] = json::array({span->first, span->second});
        arr.push_back(std::move(e));
      }
    }
    return arr;
  };

  return json{{"text", rec.text},
              {"tokens", std::move(tokens)},
              {"word_start", std::move(word_start)},
              {"token_ids", std::move(ids)},
              {"states", rec.trace.states},
              {"intermediate", std::move(rows)},
              {"intermediate_labels", rec.trace.labels},
              {"pivots", find_pivots(rec.trace.labels)},
              {"prediction", rec.prediction},
              {"abstract_prediction", abstract_predict(bundle.fsm, rec.trace.states)},
              {"patterns",
               {{"influential", related(bundle.patterns.influential, 0)},
                {"buggy", related(bundle.patterns.buggy, bundle.patterns.config.max_gap)}}}};
}

AnalysisService::AnalysisService(AnalysisBundle bundle)
    : bundle_(std::move(bundle)), fsm_json_(fsm_to_json(bundle_.fsm)) {}

ApiResponse AnalysisService::meta() const {
  const auto& inst = bundle_.instances;
  const MiningConfig& c = bundle_.patterns.config;
  json body = {{"model_version", kModelVersion},
               {"bundle_version", kBundleVersion},
               {"class_names", bundle_.model.class_names},
               {"vocab_size", bundle_.model.vocab_size()},
               {"hidden_dim", bundle_.model.hidden_dim()},
               {"pca_dim", bundle_.abstraction.pca_dim()},
               {"n_states", bundle_.abstraction.n_states()},
               {"seed", bundle_.abstraction.gmm().seed},
               {"instances",
                {{"train", inst.split_members(Split::Train).size()},
                 {"test", inst.split_members(Split::Test).size()}}},
               {"mining",
                {{"window", c.window},
                 {"influential_top_k", c.influential_top_k},
                 {"buggy_top_k", c.buggy_top_k},
                 {"min_len", c.min_len},
                 {"max_len", c.max_len},
                 {"max_gap", c.max_gap}}}};
  return ApiResponse{200, std::move(body)};
}

ApiResponse AnalysisService::fsm() const { return ApiResponse{200, fsm_json_}; }

ApiResponse AnalysisService::state(std::string_view id) const {
  return guarded([&] {
    int state_id = -1;
    const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), state_id);
    if (ec != std::errc() || ptr != id.data() + id.size()) {
      throw Error(ErrorCode::UnknownState, "state '" + std::string(id) + "' does not exist");
    }
    return ApiResponse{200, state_details_to_json(state_details(bundle_.fsm, state_id))};
  });
}

ApiResponse AnalysisService::patterns(const QueryParams& params) const {
  return guarded([&] {
    std::optional<std::string> kind;
    for (const auto& [key, value] : params) {
      if (key != "kind") throw Error(ErrorCode::BadQuery, "unknown parameter '" + key + "'");
      kind = value;
    }
    json body = json::object();
    if (!kind || *kind == "influential") body["influential"] = patterns_of_kind(bundle_.patterns.influential);
    if (!kind || *kind == "buggy") body["buggy"] = patterns_of_kind(bundle_.patterns.buggy);
    if (body.empty()) throw Error(ErrorCode::BadQuery, "kind must be influential or buggy");
    return ApiResponse{200, std::move(body)};
  });
}

ApiResponse AnalysisService::instances(const QueryParams& params) const {
  return guarded([&] {
    const QuerySpec spec = parse_query_spec(params);
    const QueryResult result = query(bundle_.instances, spec);
    json body = query_result_to_json(bundle_.instances, result);
    body["page"] = spec.page;
    body["page_size"] = spec.page_size;
    return ApiResponse{200, std::move(body)};
  });
}

ApiResponse AnalysisService::predict(std::string_view request_body) const {
  return guarded([&] {
    json req;
    try {
      req = json::parse(request_body);
    } catch (const json::exception&) {
      throw Error(ErrorCode::BadQuery, "request body is not valid JSON");
    }
    if (!req.is_object() || !req.contains("text") || !req["text"].is_string()) {
      throw Error(ErrorCode::BadQuery, "request body must be {\"text\": string}");
    }
    return ApiResponse{200, predict_payload(bundle_, req["text"].get<std::string>())};
  });
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const AnalysisService& service, std::filesystem::path ui_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  const auto reply = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json; charset=utf-8");
  };
  const auto params_of = [](const httplib::Request& req) {
    QueryParams out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
  };
  srv.Get("/api/meta", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.meta());
  });
  srv.Get("/api/fsm", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.fsm());
  });
  srv.Get(R"(/api/states/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.state(req.matches[1].str()));
  });
  srv.Get("/api/patterns", [&service, reply, params_of](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.patterns(params_of(req)));
  });
  srv.Get("/api/instances", [&service, reply, params_of](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.instances(params_of(req)));
  });
  srv.Post("/api/predict", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.predict(req.body));
  });
  if (!ui_dir.empty() && std::filesystem::is_directory(ui_dir)) {
    srv.set_mount_point("/", ui_dir.string());
  }
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(error_body("NotFound", "no such endpoint").dump(), "application/json; charset=utf-8");
    }
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace seer
