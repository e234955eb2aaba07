// Copyright 2026 The Chalset Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chalset/http_api.hpp"

#include <string_view>

#include "httplib.h"
#include "json.hpp"

namespace chalset {

using Json = nlohmann::ordered_json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformed:
    case ErrorCode::kMissingField:
      return 400;
    case ErrorCode::kUnauthorized:
      return 401;
    case ErrorCode::kForbidden:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kConflictingRevision:
      return 409;
    case ErrorCode::kStorage:
      return 500;
    default:
      return 422;
  }
}

namespace {

constexpr std::string_view kJsonType = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", std::string(kJsonType));
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message, const std::string& detail) {
  send_json(res, status, Json{{"code", code}, {"message", message}, {"detail", detail}});
}

std::string bearer_token(const httplib::Request& req) {
  const std::string header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0) {
    return {};
  }
  return header.substr(kPrefix.size());
}

Json highlights_json(const std::vector<HighlightSpan>& spans) {
  Json out = Json::array();
  for (const auto& s : spans) out.push_back({{"start", s.start}, {"end", s.end}});
  return out;
}

Json next_json(const NextPending& next) {
  Json out{{"done", next.done}, {"judged", next.judged}, {"total", next.total}};
  if (next.item) {
    const PendingItem& item = *next.item;
    Json outputs = Json::array();
    for (const auto& o : item.outputs) {
      Json entry{{"blind_label", o.blind_label}, {"translation", o.translation}};
      entry["verdict"] = o.current ? Json(verdict_name(*o.current)) : Json(nullptr);
      outputs.push_back(std::move(entry));
    }
    out["item"] = {{"position", item.position},
                   {"item_id", item.item_id},
                   {"question", item.question},
                   {"source", item.source},
                   {"source_highlights", highlights_json(item.source_highlights)},
                   {"reference", item.reference},
                   {"reference_highlights", highlights_json(item.reference_highlights)},
                   {"outputs", std::move(outputs)}};
  } else {
    out["item"] = nullptr;
  }
  return out;
}

Json progress_json(const Progress& progress) {
  Json annotators = Json::array();
  for (const auto& a : progress.annotators) {
    annotators.push_back(
        {{"annotator_id", a.annotator_id}, {"judged", a.judged}, {"total", a.total}});
  }
  return Json{{"annotators", std::move(annotators)},
              {"verdicts",
               {{"yes", progress.yes},
                {"no", progress.no},
                {"not-applicable", progress.not_applicable}}}};
}

Json export_json(const ExportResult& result) {
  Json out = Json::parse(serialize_judgments(result.judgments));
  out["complete"] = result.complete;
  Json pairs = Json::array();
  for (const auto& p : result.completeness) {
    pairs.push_back({{"item_id", p.item_id},
                     {"system_id", p.system_id},
                     {"judged", p.judged},
                     {"complete", p.complete}});
  }
  out["completeness"] = std::move(pairs);
  return out;
}

const Json& require(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw Error(ErrorCode::kMissingField, std::string("missing field '") + key + "'", key);
  }
  return body.at(key);
}

std::string require_string(const Json& body, const char* key) {
  const Json& v = require(body, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kMalformed, std::string("field '") + key + "' must be a string",
                key);
  }
  return v.get<std::string>();
}

CreateProjectRequest parse_create_request(const Json& body) {
  CreateProjectRequest request;
  request.project_id = require_string(body, "project_id");
  request.set = parse_challenge_set(require(body, "challenge_set").dump());
  request.outputs = parse_outputs(require(body, "outputs").dump(), request.set).outputs;
  request.admin_token = require_string(body, "admin_token");
  if (body.contains("master_seed")) {
    const Json& seed = body.at("master_seed");
    if (!seed.is_number_unsigned()) {
      throw Error(ErrorCode::kMalformed, "master_seed must be a non-negative integer",
                  "master_seed");
    }
    request.master_seed = seed.get<std::uint64_t>();
  }
  const Json& roster = require(body, "roster");
  if (!roster.is_array()) {
    throw Error(ErrorCode::kMalformed, "roster must be an array", "roster");
  }
  for (const auto& entry : roster) {
    request.roster.push_back(
        {require_string(entry, "annotator_id"), require_string(entry, "token")});
  }
  return request;
}

// Runs `fn`, translating library and parse errors into structured responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, http_status(e.code()), error_code_name(e.code()), e.what(), e.detail());
  } catch (const Json::exception& e) {
    send_error(res, 400, error_code_name(ErrorCode::kMalformed), "malformed JSON body",
               e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", "internal error", e.what());
  }
}

}  // namespace

void install_routes(httplib::Server& server, Service& service, HttpOptions options) {
  server.Post("/projects", [&service, options](const httplib::Request& req,
                                               httplib::Response& res) {
    guarded(res, [&] {
      const std::string token = bearer_token(req);
      if (options.creator_token.empty()) {
        throw Error(ErrorCode::kForbidden, "project creation is disabled on this server");
      }
      if (token != options.creator_token) {
        throw Error(ErrorCode::kUnauthorized, "invalid or missing token");
      }
      const CreateProjectRequest request = parse_create_request(Json::parse(req.body));
      const std::string id = service.create_project(request);
      send_json(res, 201,
                Json{{"project_id", id},
                     {"slots", request.set.items.size() *
                                   request.outputs.systems().size() *
                                   request.roster.size()}});
    });
  });

  server.Get("/projects/:id/session", [&service](const httplib::Request& req,
                                                 httplib::Response& res) {
    guarded(res, [&] {
      const AnnotationSession s = service.session(req.path_params.at("id"), bearer_token(req));
      send_json(res, 200, Json::parse(serialize_session(s)));
    });
  });

  server.Get("/projects/:id/next", [&service](const httplib::Request& req,
                                              httplib::Response& res) {
    guarded(res, [&] {
      send_json(res, 200,
                next_json(service.next_pending(req.path_params.at("id"), bearer_token(req))));
    });
  });

  server.Post("/projects/:id/judgments", [&service](const httplib::Request& req,
                                                    httplib::Response& res) {
    guarded(res, [&] {
      const std::string token = bearer_token(req);
      const Json body = Json::parse(req.body);
      const Acknowledgment ack = service.submit_judgment(
          req.path_params.at("id"), token, require_string(body, "item_id"),
          require_string(body, "blind_label"), require_string(body, "verdict"));
      send_json(res, 201, Json{{"revision", ack.revision}, {"timestamp", ack.timestamp}});
    });
  });

  server.Get("/projects/:id/progress", [&service](const httplib::Request& req,
                                                  httplib::Response& res) {
    guarded(res, [&] {
      send_json(res, 200,
                progress_json(service.progress(req.path_params.at("id"), bearer_token(req))));
    });
  });

  server.Get("/projects/:id/export", [&service](const httplib::Request& req,
                                                httplib::Response& res) {
    guarded(res, [&] {
      send_json(res, 200, export_json(service.export_judgments(req.path_params.at("id"),
                                                               bearer_token(req))));
    });
  });
}

}  // namespace chalset
