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

#include <cmath>
#include <random>

#include "doctest.h"
#include "facetgraph/error.hpp"
#include "facetgraph/search.hpp"
#include "harness.hpp"
#include "oracles.hpp"

using namespace facetgraph;

namespace {

SpanVector sv(Vec v) {
  SpanVector s;
  s.oov = !normalize_in_place(v);
  s.values = std::move(v);
  return s;
}

std::vector<SpanVector> set_of(std::initializer_list<Vec> vs) {
  std::vector<SpanVector> out;
  for (const auto& v : vs) out.push_back(sv(v));
  return out;
}

struct Fixture {
  Corpus corpus = load_corpus(harness::fixture("corpus.jsonl"));
  WordVectorTable table = load_vectors(harness::fixture("vectors.txt"), 0);
  SpanEmbeddings embeddings = embed_corpus(corpus, table);
  ProductIndex index{corpus, embeddings};
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::vector<oracle::V> raw(const std::vector<SpanVector>& vs) {
  std::vector<oracle::V> out;
  for (const auto& v : vs) out.push_back(v.values);
  return out;
}

std::vector<oracle::Product> oracle_products(const ProductIndex& index) {
  std::vector<oracle::Product> out;
  for (const auto& e : index.entries()) out.push_back({e.doc_id, raw(e.purpose_vectors), raw(e.mechanism_vectors)});
  return out;
}

std::vector<FacetQuery> scenarios() {
  std::vector<FacetQuery> qs(5);
  qs[0].mech_pos = {"light"};
  qs[0].purpose_neg = {"light"};
  qs[1].mech_pos = {"solar energy"};
  qs[1].purpose_neg = {"generating power"};
  qs[2].mech_pos = {"water"};
  qs[2].purpose_neg = {"cleaning", "drinking"};
  qs[3].mech_pos = {"RFID"};
  qs[3].purpose_neg = {"locating", "tracking"};
  qs[4].mech_pos = {"light"};
  qs[4].purpose_pos = {"cleaning"};
  return qs;
}

std::vector<oracle::Ranked> run_oracle(const FacetQuery& q, const EmbeddedQuery& e,
                                       const ProductIndex& index) {
  oracle::Query oq;
  oq.purpose_pos = raw(e.purpose_pos);
  oq.purpose_neg = raw(e.purpose_neg);
  oq.mech_pos = raw(e.mech_pos);
  oq.mech_neg = raw(e.mech_neg);
  oq.maxmin = q.method == SearchMethod::kMaxMin;
  oq.neg_percentile = q.neg_percentile;
  oq.limit = q.limit;
  return oracle::search(oracle_products(index), oq);
}

std::vector<oracle::Ranked> as_ranked(const SearchResponse& r) {
  std::vector<oracle::Ranked> out;
  for (const auto& x : r.results) out.push_back({x.doc_id, x.score});
  return out;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("distance hand cases") {
  const auto q = set_of({{1, 0}});
  const auto s = set_of({{1, 0}, {0, 1}});
  CHECK(std::abs(*distance_avg(q, s) - (1.0 - std::sqrt(2.0) / 2.0)) <= 1e-12);
  CHECK(std::abs(*distance_maxmin(q, s) - 0.0) <= 1e-12);
  CHECK(*distance_maxmin(set_of({{1, 0}, {0, 1}}), set_of({{1, 0}})) == doctest::Approx(1.0));
  CHECK(*distance_avg(set_of({{0, 1}}), set_of({{1, 0}})) == doctest::Approx(1.0));
  CHECK(*distance_avg(q, q) == 0.0);
  CHECK(*distance_avg(set_of({{-1, 0}}), q) == doctest::Approx(2.0));
}

TEST_CASE("undefined distances") {
  const auto q = set_of({{1, 0}});
  CHECK_FALSE(distance_avg(q, {}).has_value());
  CHECK_FALSE(distance_maxmin({}, q).has_value());
  CHECK_FALSE(distance_avg(q, set_of({{0, 0}})).has_value());
  // a zero vector beside a real one is ignored
  CHECK(*distance_avg(q, set_of({{0, 0}, {1, 0}})) == doctest::Approx(0.0));
}

TEST_CASE("distance properties on random sets") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  auto rand_set = [&](std::size_t n) {
    std::vector<SpanVector> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(sv({n01(gen), n01(gen), n01(gen), n01(gen)}));
    return out;
  };
  for (int trial = 0; trial < 200; ++trial) {
    auto q = rand_set(1 + gen() % 3);
    auto s = rand_set(1 + gen() % 4);
    const double mm = *distance_maxmin(q, s);
    const double avg = *distance_avg(q, s);
    CHECK(mm >= 0.0);
    CHECK(mm <= 2.0);
    CHECK(avg >= 0.0);
    CHECK(avg <= 2.0);
    CHECK(mm == doctest::Approx(*oracle::maxmin_distance(raw(q), raw(s))).epsilon(1e-12));
    CHECK(avg == doctest::Approx(*oracle::avg_distance(raw(q), raw(s))).epsilon(1e-12));

    auto dup = s;
    dup.push_back(s[gen() % s.size()]);
    CHECK(*distance_maxmin(q, dup) == doctest::Approx(mm).epsilon(1e-12));

    auto ps = s;
    auto pq = q;
    std::shuffle(ps.begin(), ps.end(), gen);
    std::shuffle(pq.begin(), pq.end(), gen);
    CHECK(*distance_avg(pq, ps) == doctest::Approx(avg).epsilon(1e-12));
    CHECK(*distance_maxmin(s, s) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("percentile interpolates linearly") {
  CHECK(percentile({1, 2, 3, 4}, 0) == 1);
  CHECK(percentile({4, 3, 2, 1}, 100) == 4);
  CHECK(percentile({1, 2, 3, 4}, 50) == doctest::Approx(2.5));
  CHECK(percentile({0, 10}, 10) == doctest::Approx(1.0));
  CHECK(percentile({7}, 30) == 7);
}

TEST_CASE("negative filter: verbatim match excluded, 100 keeps everything") {
  const auto& f = fixture();
  const auto neg = embed_query([] {
    FacetQuery q;
    q.mech_pos = {"light"};
    q.purpose_neg = {"sanitize your phone"};
    return q;
  }(), f.table).purpose_neg;
  const auto filter = negative_filter(f.index, neg, SpanLabel::kPurpose, 90.0, SearchMethod::kMaxMin);
  const auto pos = f.corpus.index_of("q04-uv-phone-sanitizer");
  REQUIRE(pos.has_value());
  CHECK_FALSE(filter.allowed[*pos]);
  const auto none = negative_filter(f.index, neg, SpanLabel::kPurpose, 100.0, SearchMethod::kAvg);
  for (bool a : none.allowed) CHECK(a);
  CHECK_THROWS_AS(negative_filter(f.index, {}, SpanLabel::kPurpose, 90.0, SearchMethod::kAvg), Error);
}

TEST_CASE("negated chunks intersect and can over-constrain") {
  std::vector<ProductIndexEntry> entries(2);
  entries[0].doc_id = "a";
  entries[0].purpose_vectors = set_of({{1, 0}});
  entries[0].mechanism_vectors = set_of({{1, 0}});
  entries[1].doc_id = "b";
  entries[1].purpose_vectors = set_of({{0, 1}});
  entries[1].mechanism_vectors = set_of({{1, 0}});
  const ProductIndex index(entries);
  FacetQuery q;
  q.neg_percentile = 50.0;
  EmbeddedQuery e;
  e.mech_pos = set_of({{1, 0}});
  e.purpose_neg = set_of({{1, 0}});
  auto r = search(q, e, index);
  REQUIRE(r.results.size() == 1);
  CHECK(r.results[0].doc_id == "b");
  e.purpose_neg = set_of({{1, 0}, {0, 1}});
  r = search(q, e, index);
  CHECK(r.over_constrained);
  CHECK(r.results.empty());
}

TEST_CASE("a chunk equal to a product's sole purpose span ranks it first with score 0") {
  const auto& f = fixture();
  FacetQuery q;
  q.purpose_pos = {"learning place values"};
  const auto r = search(q, f.index, f.table);
  REQUIRE_FALSE(r.results.empty());
  CHECK(r.results[0].doc_id == "q29-place-value-mat");
  CHECK(r.results[0].score == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(r.results[0].matched_spans.size() == 1);
  CHECK(r.results[0].matched_spans[0].span_id == "q29-place-value-mat#0");
}

TEST_CASE("invalid queries are rejected") {
  const auto& f = fixture();
  FacetQuery q;
  q.purpose_neg = {"light"};
  CHECK_THROWS_AS(search(q, f.index, f.table), Error);
  q.mech_pos = {"qzxv"};
  CHECK_THROWS_AS(search(q, f.index, f.table), Error);
  q.mech_pos = {"light"};
  CHECK_THROWS_AS(search(q, ProductIndex{}, f.table), Error);
}

TEST_CASE("fixture scenarios equal the brute-force oracle under both methods") {
  const auto& f = fixture();
  for (auto q : scenarios()) {
    for (auto method : {SearchMethod::kAvg, SearchMethod::kMaxMin}) {
      q.method = method;
      q.limit = 30;
      const auto e = embed_query(q, f.table);
      CHECK(as_ranked(search(q, e, f.index)) == run_oracle(q, e, f.index));
    }
  }
}

TEST_CASE("ranking ties break by document id") {
  std::vector<ProductIndexEntry> entries(3);
  for (std::size_t i = 0; i < 3; ++i) {
    entries[i].doc_id = std::string(1, static_cast<char>('c' - i));
    entries[i].purpose_vectors = set_of({{1, 0}});
  }
  FacetQuery q;
  EmbeddedQuery e;
  e.purpose_pos = set_of({{1, 0}});
  const auto r = search(q, e, ProductIndex(entries));
  REQUIRE(r.results.size() == 3);
  CHECK(r.results[0].doc_id == "a");
  CHECK(r.results[2].doc_id == "c");
}

TEST_CASE("combine modes and missing sides") {
  std::vector<ProductIndexEntry> entries(2);
  entries[0].doc_id = "a";
  entries[0].purpose_vectors = set_of({{1, 0}});
  entries[0].mechanism_vectors = set_of({{0, 1}});
  entries[1].doc_id = "b";  // no spans at all
  const ProductIndex index(entries);
  EmbeddedQuery e;
  e.purpose_pos = set_of({{1, 0}});
  e.mech_pos = set_of({{1, 0}});
  FacetQuery q;
  auto r = search(q, e, index);
  CHECK(r.results[0].score == doctest::Approx(0.5));
  CHECK(r.results[1].score == doctest::Approx(2.0));
  CHECK(*r.results[1].purpose_distance == doctest::Approx(2.0));
  q.combine = CombineMode::kSum;
  CHECK(search(q, e, index).results[0].score == doctest::Approx(1.0));
  q.combine = CombineMode::kPurposeOnly;
  CHECK(search(q, e, index).results[0].score == doctest::Approx(0.0));
}

TEST_CASE("removing a negated chunk never shrinks the result set") {
  const auto& f = fixture();
  const std::vector<std::string> words = {"light", "water", "coffee", "charge", "track",
                                          "clean", "secure", "health", "alarm", "solar"};
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    FacetQuery q;
    q.limit = 100;
    q.method = trial % 2 ? SearchMethod::kMaxMin : SearchMethod::kAvg;
    q.mech_pos = {words[gen() % words.size()]};
    for (int i = 0; i < 3; ++i) {
      auto& side = gen() % 2 ? q.purpose_neg : q.mech_neg;
      side.push_back(words[gen() % words.size()]);
    }
    const auto full = search(q, f.index, f.table);
    auto fewer = q;
    if (!fewer.purpose_neg.empty()) fewer.purpose_neg.pop_back();
    else fewer.mech_neg.pop_back();
    const auto relaxed = search(fewer, f.index, f.table);
    CHECK(relaxed.results.size() >= full.results.size());
    std::set<std::string> kept;
    for (const auto& r : relaxed.results) kept.insert(r.doc_id);
    for (const auto& r : full.results) CHECK(kept.count(r.doc_id) == 1);
  }
}

TEST_CASE("scaling the word table leaves fixture rankings unchanged") {
  const auto& f = fixture();
  WordVectorTable scaled(f.table.dim());
  for (const auto& line : {"light", "solar", "energy", "water", "rfid", "cleaning", "generating",
                           "power", "drinking", "locating", "tracking"}) {
    Vec v = *f.table.lookup(line);
    for (auto& x : v) x *= 4.0;
    scaled.insert(line, v);
  }
  for (const auto& q : scenarios()) {
    const auto a = search(q, embed_query(q, f.table), f.index);
    const auto b = search(q, embed_query(q, scaled), f.index);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) CHECK(a.results[i].doc_id == b.results[i].doc_id);
  }
}

TEST_CASE("document-average baseline honours negation") {
  const auto& f = fixture();
  FacetQuery q = scenarios()[0];
  const auto r = search_document_average(q, f.corpus, f.table);
  CHECK_FALSE(r.empty());
  CHECK(r.size() < f.corpus.size());
}

}  // TEST_SUITE
