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

#include <string>

#include "doctest.h"
#include "facetgraph/facetgraph.h"
#include "fixture_bundle.hpp"
#include "httplib.h"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

// Takes ownership of a C string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  fg_string_free(s);
  return out;
}

struct OpenBundle {
  fg_bundle* handle = nullptr;
  explicit OpenBundle(const char* options = nullptr) {
    REQUIRE(fg_bundle_open(harness::fixture_bundle_dir().c_str(), options, &handle) == FG_OK);
  }
  ~OpenBundle() { fg_bundle_close(handle); }
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(fg_version()).size() > 0);
  CHECK(std::string(fg_status_name(FG_OK)) == "ok");
  CHECK(std::string(fg_status_name(FG_ERR_NOT_FOUND)) == "not_found");
  CHECK(std::string(fg_status_name(FG_ERR_OVER_CONSTRAINED)) == "over_constrained");
}

TEST_CASE("errors carry a status, message and stage") {
  fg_bundle* b = nullptr;
  CHECK(fg_bundle_open("/nonexistent/bundle", nullptr, &b) == FG_ERR_IO);
  CHECK(b == nullptr);
  CHECK(std::string(fg_last_error()).find("/nonexistent/bundle") != std::string::npos);
  CHECK(std::string(fg_last_error_stage()) == "load_bundle");
  CHECK(fg_bundle_open(nullptr, nullptr, &b) == FG_ERR_INVALID_ARGUMENT);
  CHECK(fg_bundle_open(harness::fixture_bundle_dir().c_str(), "{bad", &b) == FG_ERR_PARSE);
  CHECK(fg_bundle_open(harness::fixture_bundle_dir().c_str(), "[1]", &b) == FG_ERR_INVALID_ARGUMENT);

  OpenBundle ok;
  char* out = nullptr;
  CHECK(fg_search(ok.handle, "{bad", &out) == FG_ERR_PARSE);
  CHECK(out == nullptr);
  CHECK(fg_search(ok.handle, R"({"purpose":["qzxv"]})", &out) == FG_ERR_INVALID_ARGUMENT);
  CHECK(fg_graph_neighbors(ok.handle, "P99", "out", 3, &out) == FG_ERR_NOT_FOUND);
  CHECK(fg_graph_edge(ok.handle, "P0", "P0", &out) == FG_ERR_NOT_FOUND);
  CHECK(fg_search(nullptr, "{}", &out) == FG_ERR_INVALID_ARGUMENT);
  fg_string_free(nullptr);
  fg_bundle_close(nullptr);
}

TEST_CASE("build, open, query and reload through the C interface") {
  harness::TempDir dir;
  char* manifest = nullptr;
  REQUIRE(fg_build_index(R"({"tau":0.7})", harness::fixture("build.json").c_str(), dir.file("b").c_str(),
                         &manifest) == FG_OK);
  const auto built = Json::parse(take(manifest));
  CHECK(built["config"]["tau"] == 0.7);
  CHECK(fg_build_index("{}", nullptr, dir.file("c").c_str(), &manifest) == FG_ERR_INVALID_ARGUMENT);

  OpenBundle b;
  char* out = nullptr;
  REQUIRE(fg_bundle_manifest(b.handle, &out) == FG_OK);
  const auto original = Json::parse(take(out));

  REQUIRE(fg_search(b.handle, R"({"mechanism":["RFID"],"not_purpose":["locating","tracking"]})", &out) == FG_OK);
  const auto results = Json::parse(take(out));
  CHECK(results["results"][0]["doc_id"] == "q15-rfid-checkout");

  REQUIRE(fg_inspire(b.handle, R"({"seed":"morning medicine reminder","boxes":8})", &out) == FG_OK);
  CHECK(Json::parse(take(out))["boxes"].size() == 8);

  REQUIRE(fg_graph_neighbors(b.handle, "P4", "both", 0, &out) == FG_OK);
  CHECK_FALSE(Json::parse(take(out))["neighbors"].empty());

  int status = 0;
  REQUIRE(fg_request(b.handle, "GET", "/api/concepts", R"({"kind":"purpose"})", nullptr, &status, &out) == FG_OK);
  CHECK(status == 200);
  CHECK(Json::parse(take(out))["concepts"].size() == 15);
  REQUIRE(fg_request(b.handle, "GET", "/api/missing", nullptr, nullptr, &status, &out) == FG_OK);
  CHECK(status == 404);
  take(out);

  REQUIRE(fg_bundle_reload(b.handle, dir.file("b").c_str()) == FG_OK);
  REQUIRE(fg_bundle_manifest(b.handle, &out) == FG_OK);
  const auto reloaded = Json::parse(take(out));
  CHECK(reloaded["build_id"] == built["build_id"]);
  CHECK(reloaded["build_id"] != original["build_id"]);
  CHECK(fg_bundle_reload(b.handle, "/nonexistent") == FG_ERR_IO);
}

TEST_CASE("evaluation and ingestion entry points") {
  char* out = nullptr;
  const Json search_req = {{"judgments", harness::fixture("judgments.jsonl")},
                           {"queries", harness::fixture("queries.jsonl")},
                           {"bundle", harness::fixture_bundle_dir()}};
  REQUIRE(fg_eval_search(search_req.dump().c_str(), &out) == FG_OK);
  const auto report = Json::parse(take(out));
  CHECK(report["methods"].size() == 3);

  const Json insp = {{"sessions", harness::fixture("session.jsonl")}, {"marks", harness::fixture("marks.jsonl")}};
  REQUIRE(fg_eval_inspiration(insp.dump().c_str(), &out) == FG_OK);
  CHECK(Json::parse(take(out))["raters"] == 3);

  harness::TempDir dir;
  const Json ingest = {{"input", harness::fixture("corpus.jsonl")}, {"extract", "heuristic"},
                       {"output", dir.file("pred.jsonl")}};
  REQUIRE(fg_ingest(ingest.dump().c_str(), &out) == FG_OK);
  CHECK(Json::parse(take(out))["stats"]["documents"] == 30);
  const Json ext = {{"pred", dir.file("pred.jsonl")}, {"gold", harness::fixture("corpus.jsonl")}};
  REQUIRE(fg_eval_extraction(ext.dump().c_str(), &out) == FG_OK);
  CHECK(Json::parse(take(out)).contains("report"));
  CHECK(fg_eval_search("{}", &out) == FG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("the HTTP server answers over a real socket") {
  OpenBundle b;
  fg_server* server = nullptr;
  REQUIRE(fg_server_start(b.handle, "127.0.0.1", 0, &server) == FG_OK);
  const int port = fg_server_port(server);
  CHECK(port > 0);

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(Json::parse(res->body)["status"] == "ok");

  res = client.Post("/api/search", R"({"mechanism":["light"],"purpose":["cleaning"]})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(Json::parse(res->body)["results"][0]["doc_id"] == "q04-uv-phone-sanitizer");

  res = client.Get("/api/graph/neighbors/P4?direction=both&top=1");
  REQUIRE(res);
  CHECK(Json::parse(res->body)["neighbors"].size() == 1);

  res = client.Post("/api/search", "{oops", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  res = client.Get("/nowhere");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(Json::parse(res->body).contains("message"));

  fg_server_stop(server);
  CHECK(fg_server_start(b.handle, "127.0.0.1", 70000, &server) == FG_ERR_INVALID_ARGUMENT);
}

}  // TEST_SUITE
