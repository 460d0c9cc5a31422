// Copyright 2026 The facetgraph Authors.
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

#include "facetgraph/facetgraph.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <thread>

#include "facetgraph/bundle.hpp"
#include "facetgraph/error.hpp"
#include "facetgraph/evaluation.hpp"
#include "facetgraph/server.hpp"
#include "facetgraph/service.hpp"

#ifndef FG_VERSION_STRING
#define FG_VERSION_STRING "0.0.0"
#endif

struct fg_bundle {
  std::shared_ptr<facetgraph::Service> service;
};

struct fg_server {
  std::shared_ptr<facetgraph::Service> service;
  std::unique_ptr<facetgraph::HttpServer> http;
  std::thread worker;
  int port = 0;
};

namespace {

using facetgraph::Error;
using facetgraph::ErrorCode;
using facetgraph::Json;

thread_local std::string g_error;
thread_local std::string g_stage;

fg_status fail(ErrorCode code, const std::string& stage, const std::string& message) {
  g_error = message;
  g_stage = stage;
  return static_cast<fg_status>(code);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
fg_status guarded(const char* stage, F&& f) {
  try {
    g_error.clear();
    g_stage.clear();
    f();
    return FG_OK;
  } catch (const Error& e) {
    return fail(e.code(), e.stage(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ErrorCode::kParse, stage, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ErrorCode::kInternal, stage, "out of memory");
  } catch (const std::exception& e) {
    return fail(ErrorCode::kInternal, stage, e.what());
  } catch (...) {
    return fail(ErrorCode::kInternal, stage, "unknown failure");
  }
}

void require(const void* p, const char* name, const char* stage) {
  if (p == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, stage, std::string(name) + " must not be NULL");
  }
}

Json parse_object(const char* text, const char* stage) {
  if (text == nullptr) return Json::object();
  Json j = facetgraph::parse_json(text, stage);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, stage, "expected a JSON object");
  return j;
}

template <typename F>
fg_status json_call(const char* stage, const char* request, char** out, F&& f) {
  return guarded(stage, [&] {
    require(out, "out", stage);
    *out = dup_string(f(parse_object(request, stage)).dump());
  });
}

}  // namespace

extern "C" {

const char* fg_version(void) { return FG_VERSION_STRING; }

const char* fg_status_name(fg_status status) {
  if (status == FG_OK) return "ok";
  if (status < FG_ERR_INVALID_ARGUMENT || status > FG_ERR_INTERNAL) return "unknown";
  return facetgraph::error_code_name(static_cast<ErrorCode>(status));
}

const char* fg_last_error(void) { return g_error.c_str(); }

const char* fg_last_error_stage(void) { return g_stage.c_str(); }

void fg_string_free(char* str) { std::free(str); }

fg_status fg_ingest(const char* request_json, char** result_json) {
  return json_call("ingest", request_json, result_json,
                   [](const Json& r) { return facetgraph::ingest_json(r); });
}

fg_status fg_build_index(const char* settings_json, const char* config_file, const char* out_dir,
                         char** manifest_json) {
  return guarded("build", [&] {
    require(out_dir, "out_dir", "build");
    require(manifest_json, "manifest_json", "build");
    std::map<std::string, std::string> overrides;
    const Json settings = parse_object(settings_json, "config");
    for (const auto& [key, value] : settings.items()) {
      overrides[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    std::optional<std::string> file;
    if (config_file != nullptr && *config_file != '\0') file = config_file;
    const auto config = facetgraph::resolve_build_config(file, overrides);
    auto report = facetgraph::build_index(config, out_dir);
    report.manifest["build_seconds"] = report.seconds;
    *manifest_json = dup_string(report.manifest.dump());
  });
}

fg_status fg_bundle_open(const char* dir, const char* options_json, fg_bundle** out) {
  return guarded("load_bundle", [&] {
    require(dir, "dir", "load_bundle");
    require(out, "out", "load_bundle");
    const Json opts = parse_object(options_json, "load_bundle");
    facetgraph::ServiceOptions options;
    options.marks_path = opts.value("marks_path", std::string());
    options.sessions_path = opts.value("sessions_path", std::string());
    auto handle = std::make_unique<fg_bundle>();
    handle->service = std::make_shared<facetgraph::Service>(dir, std::move(options));
    *out = handle.release();
  });
}

void fg_bundle_close(fg_bundle* bundle) { delete bundle; }

fg_status fg_bundle_reload(fg_bundle* bundle, const char* dir) {
  return guarded("reload", [&] {
    require(bundle, "bundle", "reload");
    bundle->service->reload(dir == nullptr ? std::string() : std::string(dir));
  });
}

fg_status fg_bundle_manifest(fg_bundle* bundle, char** manifest_json) {
  return guarded("manifest", [&] {
    require(bundle, "bundle", "manifest");
    require(manifest_json, "manifest_json", "manifest");
    *manifest_json = dup_string(bundle->service->snapshot()->manifest.dump());
  });
}

fg_status fg_request(fg_bundle* bundle, const char* method, const char* path,
                     const char* params_json, const char* body, int* http_status,
                     char** response_json) {
  return guarded("request", [&] {
    require(bundle, "bundle", "request");
    require(method, "method", "request");
    require(path, "path", "request");
    require(http_status, "http_status", "request");
    require(response_json, "response_json", "request");
    std::map<std::string, std::string> params;
    const Json given = parse_object(params_json, "request");
    for (const auto& [key, value] : given.items()) {
      params[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    const auto resp = bundle->service->handle(method, path, params, body ? body : "");
    *http_status = resp.status;
    *response_json = dup_string(resp.body.dump());
  });
}

fg_status fg_search(fg_bundle* bundle, const char* query_json, char** result_json) {
  return guarded("search", [&] {
    require(bundle, "bundle", "search");
    require(query_json, "query_json", "search");
    require(result_json, "result_json", "search");
    const auto snap = bundle->service->snapshot();
    *result_json =
        dup_string(facetgraph::search_json(*snap, facetgraph::parse_json(query_json, "search")).dump());
  });
}

fg_status fg_inspire(fg_bundle* bundle, const char* request_json, char** session_json) {
  return guarded("inspire", [&] {
    require(bundle, "bundle", "inspire");
    require(session_json, "session_json", "inspire");
    const auto snap = bundle->service->snapshot();
    *session_json =
        dup_string(facetgraph::inspire_json(*snap, parse_object(request_json, "inspire")).dump());
  });
}

fg_status fg_graph_neighbors(fg_bundle* bundle, const char* concept_id, const char* direction,
                             size_t top, char** result_json) {
  return guarded("graph", [&] {
    require(bundle, "bundle", "graph");
    require(concept_id, "concept_id", "graph");
    require(result_json, "result_json", "graph");
    const auto snap = bundle->service->snapshot();
    *result_json = dup_string(
        facetgraph::neighbors_json(*snap, concept_id, direction ? direction : "out", top).dump());
  });
}

fg_status fg_graph_edge(fg_bundle* bundle, const char* from, const char* to, char** result_json) {
  return guarded("graph", [&] {
    require(bundle, "bundle", "graph");
    require(from, "from", "graph");
    require(to, "to", "graph");
    require(result_json, "result_json", "graph");
    const auto snap = bundle->service->snapshot();
    *result_json = dup_string(facetgraph::edge_json(*snap, from, to).dump());
  });
}

fg_status fg_eval_search(const char* request_json, char** report_json) {
  return json_call("eval", request_json, report_json,
                   [](const Json& r) { return facetgraph::eval_search(r); });
}

fg_status fg_eval_extraction(const char* request_json, char** report_json) {
  return json_call("eval", request_json, report_json,
                   [](const Json& r) { return facetgraph::eval_extraction(r); });
}

fg_status fg_eval_inspiration(const char* request_json, char** report_json) {
  return json_call("eval", request_json, report_json,
                   [](const Json& r) { return facetgraph::eval_inspiration(r); });
}

fg_status fg_server_start(fg_bundle* bundle, const char* host, int port, fg_server** out) {
  return guarded("serve", [&] {
    require(bundle, "bundle", "serve");
    require(out, "out", "serve");
    if (port < 0 || port > 65535) {
      throw Error(ErrorCode::kInvalidArgument, "serve", "port out of range");
    }
    auto server = std::make_unique<fg_server>();
    server->service = bundle->service;
    server->http = std::make_unique<facetgraph::HttpServer>(server->service);
    server->port = server->http->bind(host ? host : "127.0.0.1", port);
    auto* http = server->http.get();
    server->worker = std::thread([http] { http->listen(); });
    http->wait_until_ready();
    *out = server.release();
  });
}

int fg_server_port(const fg_server* server) { return server ? server->port : -1; }

fg_status fg_server_wait(fg_server* server) {
  return guarded("serve", [&] {
    require(server, "server", "serve");
    if (server->worker.joinable()) server->worker.join();
  });
}

void fg_server_stop(fg_server* server) {
  if (server == nullptr) return;
  server->http->stop();
  if (server->worker.joinable()) server->worker.join();
  delete server;
}

}  // extern "C"
