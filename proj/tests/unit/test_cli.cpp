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

#include <sstream>

#include "doctest.h"
#include "facetgraph/facetgraph.h"
#include "fixture_bundle.hpp"
#include "json.hpp"

using Json = nlohmann::json;
using harness::quote;
using harness::run;

namespace {

std::string cli(const std::string& args) { return quote(harness::cli_path()) + " " + args; }

std::string bundle_arg() { return "--bundle " + quote(harness::fixture_bundle_dir()); }

std::vector<Json> records(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with status 2") {
  CHECK(run(cli("search " + bundle_arg() + " --mechanism light --bogus"), true).exit_code == 2);
  CHECK(run(cli("frobnicate"), true).exit_code == 2);
  CHECK(run(cli("search --mechanism light"), true).exit_code == 2);
  CHECK(run(cli("search " + bundle_arg() + " --mechanism light --method fastest"), true).exit_code == 2);
  const auto missing = run(cli("search --bundle /nonexistent/bundle --mechanism light"), true);
  CHECK(missing.exit_code == 1);
  CHECK(missing.out.find("load_bundle") != std::string::npos);
}

TEST_CASE("search records equal the C interface results") {
  fg_bundle* b = nullptr;
  REQUIRE(fg_bundle_open(harness::fixture_bundle_dir().c_str(), nullptr, &b) == FG_OK);
  struct Case {
    std::string args;
    Json query;
  };
  const std::vector<Case> cases = {
      {"--mechanism light --not-purpose light", {{"mechanism", {"light"}}, {"not_purpose", {"light"}}}},
      {"--mechanism water --not-purpose cleaning --not-purpose drinking --method maxmin",
       {{"mechanism", {"water"}}, {"not_purpose", {"cleaning", "drinking"}}, {"method", "maxmin"}}},
      {"--mechanism light --purpose cleaning --limit 4", {{"mechanism", {"light"}}, {"purpose", {"cleaning"}}, {"limit", 4}}},
  };
  for (const auto& c : cases) {
    INFO(c.args);
    const auto res = run(cli("--format records search " + bundle_arg() + " " + c.args));
    REQUIRE(res.exit_code == 0);
    char* out = nullptr;
    REQUIRE(fg_search(b, c.query.dump().c_str(), &out) == FG_OK);
    const auto api = Json::parse(out);
    fg_string_free(out);
    const auto lines = records(res.out);
    REQUIRE(lines.size() == api["results"].size());
    for (std::size_t i = 0; i < lines.size(); ++i) CHECK(lines[i] == api["results"][i]);
  }
  fg_bundle_close(b);
}

TEST_CASE("text search output is a ranked table") {
  const auto res = run(cli("search " + bundle_arg() + " --mechanism RFID --not-purpose locating --not-purpose tracking --limit 2"));
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("rank") == 0);
  CHECK(res.out.find("q15-rfid-checkout") != std::string::npos);
  CHECK(res.out.find("candidates after negation") != std::string::npos);
}

TEST_CASE("build, ingest and inspire from the command line") {
  harness::TempDir dir;
  const auto build = run(cli("build --config " + quote(harness::fixture("build.json")) + " --out " + quote(dir.file("b"))), true);
  REQUIRE(build.exit_code == 0);
  CHECK(build.out.find("purpose concepts") != std::string::npos);
  CHECK(harness::slurp(dir.file("b/manifest.json")).find(harness::fixture_bundle()->build_id) != std::string::npos);

  const auto ingest = run(cli("--format records ingest " + quote(harness::fixture("corpus.jsonl"))));
  REQUIRE(ingest.exit_code == 0);
  CHECK(Json::parse(ingest.out)["stats"]["documents"] == 30);

  const auto inspire = run(cli("--format records inspire --bundle " + quote(dir.file("b")) +
                               " --seed 'morning medicine reminder' --boxes 8 --rng-seed 3 --out " +
                               quote(dir.file("sessions.jsonl"))));
  REQUIRE(inspire.exit_code == 0);
  const auto session = Json::parse(inspire.out);
  CHECK(session["boxes"].size() == 8);
  CHECK(harness::slurp(dir.file("sessions.jsonl")).find(session["session_id"].get<std::string>()) != std::string::npos);
  CHECK(run(cli("inspire --bundle " + quote(dir.file("b")) + " --seed x --boxes 7"), true).exit_code != 0);
}

TEST_CASE("graph and evaluation commands") {
  const auto nb = run(cli("--format records graph neighbors " + bundle_arg() + " --concept P4 --direction both"));
  REQUIRE(nb.exit_code == 0);
  CHECK_FALSE(records(nb.out).empty());

  const auto table = run(cli("eval search --judgments " + quote(harness::fixture("judgments.jsonl")) + " --queries " +
                             quote(harness::fixture("queries.jsonl")) + " " + bundle_arg()));
  REQUIRE(table.exit_code == 0);
  CHECK(table.out.find("MAP") != std::string::npos);
  CHECK(table.out.find("maxmin") != std::string::npos);
  CHECK(table.out.find("doc_average") != std::string::npos);

  const auto agree = run(cli("eval inspiration --sessions " + quote(harness::fixture("session.jsonl")) + " --marks " +
                             quote(harness::fixture("marks.jsonl"))));
  REQUIRE(agree.exit_code == 0);
  CHECK(agree.out.find("graph_textrank") != std::string::npos);
}

}  // TEST_SUITE
