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
#include "facetgraph/corpus.hpp"
#include "facetgraph/error.hpp"
#include "harness.hpp"

using namespace facetgraph;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

Corpus from_text(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in, "inline");
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("tokenize detaches punctuation and keeps intra-word hyphens") {
  CHECK(surfaces(tokenize("charge your phone.")) ==
        std::vector<std::string>{"charge", "your", "phone", "."});
  CHECK(tokenize("").empty());
  CHECK(surfaces(tokenize("Wi-Fi enabled")) == std::vector<std::string>{"Wi-Fi", "enabled"});
  CHECK(surfaces(tokenize("it's -dash- (ok)")) ==
        std::vector<std::string>{"it's", "-", "dash", "-", "(", "ok", ")"});
}

TEST_CASE("token offsets are code points, increasing and disjoint") {
  const std::string text = "Café naïve, 日本 mug";
  const auto tokens = tokenize(text);
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0].start == 0);
  CHECK(tokens[0].end == 4);
  CHECK(tokens[1].surface == "naïve");
  CHECK(tokens[3].surface == "日本");
  CHECK(tokens[3].start == 12);
  CHECK(tokens[3].end == 14);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    CHECK(tokens[i].start < tokens[i].end);
    CHECK(utf8_substr(text, tokens[i].start, tokens[i].end) == tokens[i].surface);
    if (i > 0) CHECK(tokens[i - 1].end <= tokens[i].start);
  }
}

TEST_CASE("stats count documents, spans and tokens") {
  const auto corpus = from_text(
      R"({"id":"a","title":"t","text":"heats water fast using a coil","spans":[)"
      R"({"start":0,"end":11,"label":"purpose"},{"start":0,"end":5,"label":"purpose"},)"
      R"({"start":25,"end":29,"label":"mechanism"}]})"
      "\n");
  const auto s = corpus.stats();
  CHECK(s.documents == 1);
  CHECK(s.purpose_spans == 2);
  CHECK(s.mechanism_spans == 1);
  CHECK(s.tokens == 6);
  CHECK(s.purpose_tokens == 2);  // the overlapping span does not double count
  CHECK(s.mechanism_tokens == 1);
  CHECK(corpus.at(0).spans[0].surface == "heats water");
}

TEST_CASE("out-of-range span is rejected naming the document") {
  try {
    from_text(R"({"id":"lamp-7","title":"","text":"short","spans":[{"start":2,"end":40,"label":"purpose"}]})"
              "\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(std::string(e.what()).find("lamp-7") != std::string::npos);
  }
}

TEST_CASE("malformed records and duplicate ids are reported with their line") {
  try {
    from_text("{\"id\":\"a\",\"text\":\"x\"}\n{not json\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(from_text("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n"), Error);
  CHECK_THROWS_AS(from_text("{\"id\":\"\",\"text\":\"x\"}\n"), Error);
  CHECK_THROWS_AS(
      from_text(R"({"id":"a","text":"abc","spans":[{"start":2,"end":2,"label":"purpose"}]})" "\n"),
      Error);
  CHECK_THROWS_AS(
      from_text(R"({"id":"a","text":"abc","spans":[{"start":0,"end":2,"label":"other"}]})" "\n"),
      Error);
}

TEST_CASE("fixture loads with label shares near the reference proportions") {
  const auto corpus = load_corpus(harness::fixture("corpus.jsonl"));
  const auto s = corpus.stats();
  CHECK(s.documents == 30);
  CHECK(std::abs(100.0 * s.purpose_share() - 15.9) <= 5.0);
  CHECK(std::abs(100.0 * s.mechanism_share() - 14.5) <= 5.0);
  CHECK(s.purpose_share() + s.mechanism_share() + s.other_share() == doctest::Approx(1.0));
}

TEST_CASE("serialize and reload is field-for-field identical") {
  const auto corpus = load_corpus(harness::fixture("corpus.jsonl"));
  std::ostringstream out;
  write_corpus(corpus, out);
  const auto again = from_text(out.str());
  CHECK(again == corpus);
  for (const auto& doc : again.documents()) {
    for (const auto& span : doc.spans) {
      CHECK(span.surface == utf8_substr(doc.text, span.start, span.end));
    }
  }
}

TEST_CASE("span ids resolve back to their spans") {
  const auto corpus = load_corpus(harness::fixture("corpus.jsonl"));
  for (const auto label : {SpanLabel::kPurpose, SpanLabel::kMechanism}) {
    for (const auto& ref : corpus.spans_of(label)) {
      const auto id = corpus.span_id(ref);
      const auto back = corpus.resolve(id);
      REQUIRE(back.has_value());
      CHECK(*back == ref);
      CHECK(corpus.span(ref).label == label);
    }
  }
  CHECK_FALSE(corpus.resolve("nope#0").has_value());
  CHECK_FALSE(corpus.resolve("q01-desk-lamp#99").has_value());
}

}  // TEST_SUITE
