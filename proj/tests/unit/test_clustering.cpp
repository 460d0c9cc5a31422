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

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "facetgraph/clustering.hpp"
#include "facetgraph/error.hpp"
#include "harness.hpp"
#include "oracles.hpp"

using namespace facetgraph;

namespace {

std::vector<Vec> blobs(std::size_t per_blob, std::vector<std::size_t>* truth, std::uint64_t seed) {
  const std::vector<Vec> centers = {{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 20}};
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<Vec> out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      out.push_back({centers[c][0] + noise(gen), centers[c][1] + noise(gen)});
      if (truth) truth->push_back(c);
    }
  }
  return out;
}

Corpus corpus_with_spans(std::size_t docs) {
  std::vector<Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    doc.id = "d" + std::to_string(d);
    doc.text = "keep it warm";
    doc.spans.push_back({SpanLabel::kPurpose, 0, 12, "keep it warm", std::nullopt});
    out.push_back(doc);
  }
  return Corpus(out);
}

struct Fixture {
  Corpus corpus = load_corpus(harness::fixture("corpus.jsonl"));
  SpanEmbeddings embeddings = embed_corpus(corpus, load_vectors(harness::fixture("vectors.txt"), 0));
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("two groups on a line") {
  const std::vector<Vec> pts = {{0}, {1}, {10}, {11}};
  const auto r = kmeans_best_of(pts, 2, 1, 4);
  std::vector<double> c = {r.centroids[0][0], r.centroids[1][0]};
  std::sort(c.begin(), c.end());
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(10.5));
  CHECK(r.inertia == doctest::Approx(1.0));
  CHECK(silhouette(pts, r.assignments) == doctest::Approx(0.8997).epsilon(1e-4));
  CHECK(silhouette(pts, r.assignments) == doctest::Approx(oracle::silhouette(pts, r.assignments)).epsilon(1e-12));
}

TEST_CASE("k equal to the number of points gives zero inertia") {
  const std::vector<Vec> pts = {{0, 1}, {3, 2}, {-4, 7}, {9, 9}, {2, -5}};
  const auto r = kmeans_pp(pts, pts.size(), 3);
  CHECK(r.inertia == doctest::Approx(0.0));
  CHECK(std::set<std::size_t>(r.assignments.begin(), r.assignments.end()).size() == pts.size());
}

TEST_CASE("invalid k") {
  const std::vector<Vec> pts = {{0}, {1}};
  CHECK_THROWS_AS(kmeans_pp(pts, 0, 1), Error);
  CHECK_THROWS_AS(kmeans_pp(pts, 3, 1), Error);
}

TEST_CASE("well separated blobs are recovered and the knee finds five") {
  std::vector<std::size_t> truth;
  const auto pts = blobs(40, &truth, 21);
  const auto r = kmeans_best_of(pts, 5, 2, 4);
  CHECK(oracle::adjusted_rand(r.assignments, truth) >= 0.95);

  ClusteringConfig config;
  config.k_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  config.seed = 4;
  const auto sel = select_k(pts, config);
  CHECK(sel.k == 5);
  CHECK_FALSE(sel.no_pronounced_knee);
  REQUIRE(sel.trace.size() == config.k_grid.size());
  for (std::size_t i = 0; i < sel.trace.size(); ++i) CHECK(sel.trace[i].k == config.k_grid[i]);

  config.selection = KSelection::kArgmax;
  CHECK(select_k(pts, config).k == 5);
}

TEST_CASE("uniform data has no pronounced knee") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pts;
  for (int i = 0; i < 400; ++i) pts.push_back({u(gen), u(gen), u(gen)});
  ClusteringConfig config;
  config.k_grid = {2, 3, 4, 5, 6, 7, 8};
  const auto sel = select_k(pts, config);
  CHECK(sel.no_pronounced_knee);
  CHECK(sel.trace.size() == config.k_grid.size());
}

TEST_CASE("silhouette equals the oracle on random labelings") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + gen() % 30;
    const std::size_t k = 2 + gen() % 4;
    std::vector<Vec> pts;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({n01(gen), n01(gen), n01(gen)});
      labels.push_back(i < k ? i : gen() % k);
    }
    CHECK(silhouette(pts, labels) == doctest::Approx(oracle::silhouette(pts, labels)).epsilon(1e-9));
  }
}

TEST_CASE("inertia never increases across Lloyd iterations") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = blobs(15, nullptr, seed + 100);
    const auto r = kmeans_pp(pts, 3 + seed % 5, seed);
    CHECK_FALSE(r.inertia_trace.empty());
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
      CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("identical span vectors collapse into one concept with a warning") {
  const auto corpus = corpus_with_spans(6);
  std::vector<std::vector<SpanVector>> vecs(6, {SpanVector{{0.6, 0.8}, false}});
  const SpanEmbeddings embeddings(2, vecs);

  ClusteringConfig automatic;
  auto set = build_concepts(corpus, embeddings, SpanLabel::kPurpose, automatic);
  CHECK(set.concepts.size() == 1);
  CHECK_FALSE(set.warnings.empty());

  ClusteringConfig fixed;
  fixed.k = 4;
  set = build_concepts(corpus, embeddings, SpanLabel::kPurpose, fixed);
  CHECK(set.chosen_k == 1);
  CHECK(set.concepts.size() == 1);
  CHECK(set.warnings.size() == 1);
  CHECK(set.concepts[0].title_spans == std::vector<std::string>{"keep it warm"});
}

TEST_CASE("out-of-vocabulary spans stay unclustered") {
  const auto corpus = corpus_with_spans(3);
  const SpanEmbeddings embeddings(
      2, {{SpanVector{{1, 0}, false}}, {SpanVector{{0, 0}, true}}, {SpanVector{{0, 1}, false}}});
  ClusteringConfig config;
  config.k = 2;
  const auto set = build_concepts(corpus, embeddings, SpanLabel::kPurpose, config);
  CHECK(set.unclustered_span_ids == std::vector<std::string>{"d1#0"});
  CHECK(set.concepts.size() == 2);
  CHECK_THROWS_AS(build_concepts(corpus, embeddings, SpanLabel::kMechanism, config), Error);
}

TEST_CASE("fixture concepts partition the span set and are deterministic") {
  const auto& f = fixture();
  ClusteringConfig config;
  config.k = 15;
  config.seed = 7;
  config.restarts = 8;
  const auto a = build_concepts(f.corpus, f.embeddings, SpanLabel::kPurpose, config);
  const auto b = build_concepts(f.corpus, f.embeddings, SpanLabel::kPurpose, config);
  CHECK(a.concepts.size() == 15);

  std::map<std::string, std::string> owner;
  for (std::size_t c = 0; c < a.concepts.size(); ++c) {
    const auto& con = a.concepts[c];
    CHECK(con.id == "P" + std::to_string(c));
    CHECK_FALSE(con.members.empty());
    CHECK(con.title_spans.size() <= 3);
    CHECK(con.member_span_ids == b.concepts[c].member_span_ids);
    CHECK(con.centroid == b.concepts[c].centroid);
    for (const auto& id : con.member_span_ids) CHECK(owner.emplace(id, con.id).second);
  }
  CHECK(owner.size() + a.unclustered_span_ids.size() == f.corpus.spans_of(SpanLabel::kPurpose).size());

  CHECK(owner.at("q24-power-bank#0") == owner.at("q25-charging-pad#0"));
  CHECK(owner.at("q24-power-bank#0") == owner.at("q26-car-charger#0"));
  CHECK(owner.at("q27-window-cleaning-robot#0") == owner.at("q28-shoe-cleaner#0"));
  CHECK(owner.at("q24-power-bank#0") != owner.at("q27-window-cleaning-robot#0"));
  CHECK(owner.at("q01-desk-lamp#0") != owner.at("q24-power-bank#0"));
}

TEST_CASE("first member in corpus order decides concept numbering") {
  const auto& f = fixture();
  ClusteringConfig config;
  config.k = 12;
  config.seed = 7;
  const auto set = build_concepts(f.corpus, f.embeddings, SpanLabel::kMechanism, config);
  std::vector<std::size_t> firsts;
  for (const auto& c : set.concepts) {
    firsts.push_back(c.members.front().doc * 1000 + c.members.front().span);
  }
  CHECK(std::is_sorted(firsts.begin(), firsts.end()));
}

}  // TEST_SUITE
