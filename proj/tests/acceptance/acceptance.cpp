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

// One PASS/FAIL line per headline criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "facetgraph/bundle.hpp"
#include "facetgraph/clustering.hpp"
#include "facetgraph/extraction.hpp"
#include "facetgraph/facetgraph.h"
#include "facetgraph/inspiration.hpp"
#include "facetgraph/metrics.hpp"
#include "facetgraph/rules.hpp"
#include "facetgraph/search.hpp"
#include "fixture_bundle.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace facetgraph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.str("");
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Scenario {
  FacetQuery query;
  std::vector<std::string> excluded;  // typical-use documents
  std::vector<std::string> alternatives;  // alternative-use documents expected in the top 3
};

std::vector<Scenario> scenarios() {
  std::vector<Scenario> s(5);
  s[0].query.mech_pos = {"light"};
  s[0].query.purpose_neg = {"light"};
  s[0].excluded = {"q01-desk-lamp", "q02-night-light"};
  s[0].alternatives = {"q04-uv-phone-sanitizer", "q05-billiard-laser"};
  s[1].query.mech_pos = {"solar energy"};
  s[1].query.purpose_neg = {"generating power"};
  s[1].excluded = {"q07-solar-charger", "q08-solar-generator"};
  s[1].alternatives = {"q03-solar-bulbs"};
  s[2].query.mech_pos = {"water"};
  s[2].query.purpose_neg = {"cleaning", "drinking"};
  s[2].excluded = {"q09-water-filter", "q10-dish-washer"};
  s[2].alternatives = {"q11-hydrogen-lighter"};
  s[3].query.mech_pos = {"RFID"};
  s[3].query.purpose_neg = {"locating", "tracking"};
  s[3].excluded = {"q12-rfid-pet-tracker", "q14-rfid-key-finder"};
  s[3].alternatives = {"q13-rfid-luggage-lock"};
  // No negated chunk here: the typical-use lamp must stay out of the top 3.
  s[4].query.mech_pos = {"light"};
  s[4].query.purpose_pos = {"cleaning"};
  s[4].excluded = {"q01-desk-lamp"};
  s[4].alternatives = {"q06-uv-barbell-box"};
  return s;
}

std::vector<oracle::V> raw(const std::vector<SpanVector>& vs) {
  std::vector<oracle::V> out;
  for (const auto& v : vs) out.push_back(v.values);
  return out;
}

void search_oracle_equality(Outcome& out) {
  const auto bundle = harness::fixture_bundle();
  std::vector<oracle::Product> products;
  for (const auto& e : bundle->index.entries()) {
    products.push_back({e.doc_id, raw(e.purpose_vectors), raw(e.mechanism_vectors)});
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t compared = 0;
  for (auto sc : scenarios()) {
    for (auto method : {SearchMethod::kAvg, SearchMethod::kMaxMin}) {
      auto q = sc.query;
      q.method = method;
      q.limit = 30;
      const auto e = embed_query(q, bundle->table, bundle->embed_options);
      const auto got = search(q, e, bundle->index);
      oracle::Query oq;
      oq.purpose_pos = raw(e.purpose_pos);
      oq.purpose_neg = raw(e.purpose_neg);
      oq.mech_pos = raw(e.mech_pos);
      oq.mech_neg = raw(e.mech_neg);
      oq.maxmin = method == SearchMethod::kMaxMin;
      oq.neg_percentile = q.neg_percentile;
      oq.limit = q.limit;
      const auto want = oracle::search(products, oq);
      bool same = got.results.size() == want.size();
      for (std::size_t i = 0; same && i < want.size(); ++i) {
        same = got.results[i].doc_id == want[i].id && got.results[i].score == want[i].score;
      }
      out.require(same, "ranking differs for " + q.mech_pos[0] + " (" + method_name(method) + ")");
      compared += want.size();
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail << "10 rankings, " << compared << " ranked entries identical; " << secs << " s";
}

void negation_semantics(Outcome& out) {
  const auto bundle = harness::fixture_bundle();
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& sc : scenarios()) {
    for (auto method : {SearchMethod::kAvg, SearchMethod::kMaxMin}) {
      auto q = sc.query;
      q.method = method;
      q.limit = 30;
      const auto a = search(q, bundle->index, bundle->table, bundle->embed_options);
      const auto b = search(q, bundle->index, bundle->table, bundle->embed_options);
      std::vector<std::string> ids;
      for (const auto& r : a.results) ids.push_back(r.doc_id);
      std::vector<std::string> again;
      for (const auto& r : b.results) again.push_back(r.doc_id);
      out.require(ids == again, "non-deterministic ranking");
      const std::string tag = q.mech_pos[0] + "/" + method_name(method);
      const bool negated = !q.purpose_neg.empty();
      for (const auto& x : sc.excluded) {
        const auto pos = std::find(ids.begin(), ids.end(), x) - ids.begin();
        if (negated) out.require(pos == static_cast<long>(ids.size()), tag + ": " + x + " not excluded");
        else out.require(pos >= 3, tag + ": " + x + " in the top 3");
      }
      for (const auto& x : sc.alternatives) {
        const auto alt = std::find(ids.begin(), ids.end(), x) - ids.begin();
        out.require(alt < 3, tag + ": " + x + " at rank " + std::to_string(alt + 1));
      }
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (out.pass) out.detail << "5 scenarios x 2 methods; typical-use excluded, alternative in top 3; " << secs << " s";
}

void distance_hand_cases(Outcome& out) {
  auto set = [](std::vector<Vec> vs) {
    std::vector<SpanVector> o;
    for (auto& v : vs) o.push_back({v, false});
    return o;
  };
  const auto q = set({{1, 0}});
  const auto s = set({{1, 0}, {0, 1}});
  const double avg = *distance_avg(q, s);
  const double mm = *distance_maxmin(q, s);
  out.require(std::abs(avg - (1.0 - std::sqrt(2.0) / 2.0)) <= 1e-12, "AVG = " + std::to_string(avg));
  out.require(std::abs(mm) <= 1e-12, "MAXMIN = " + std::to_string(mm));
  if (out.pass) out.detail << "AVG " << avg << ", MAXMIN " << mm;
}

void clustering(Outcome& out) {
  const std::vector<Vec> centers = {{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 20}};
  std::mt19937_64 gen(21);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<Vec> pts;
  std::vector<std::size_t> truth;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < 40; ++i) {
      pts.push_back({centers[c][0] + noise(gen), centers[c][1] + noise(gen)});
      truth.push_back(c);
    }
  }
  ClusteringConfig config;
  config.k_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  config.seed = 4;
  const auto sel = select_k(pts, config);
  out.require(sel.k == 5, "select_k returned " + std::to_string(sel.k));
  const auto run = kmeans_best_of(pts, 5, 2, 4);
  const double ari = oracle::adjusted_rand(run.assignments, truth);
  out.require(ari >= 0.95, "ARI " + std::to_string(ari));
  const double sil = silhouette(pts, run.assignments, 0);
  const double ref = oracle::silhouette(pts, run.assignments);
  out.require(std::abs(sil - ref) <= 1e-9, "silhouette differs from reference");
  const std::vector<Vec> line = {{0}, {1}, {10}, {11}};
  const double line_sil = silhouette(line, kmeans_best_of(line, 2, 1, 4).assignments);
  out.require(std::abs(line_sil - 0.8997) <= 1e-4, "line silhouette " + std::to_string(line_sil));
  if (out.pass) {
    out.detail << "k=5, ARI " << ari << ", |silhouette - reference| " << std::abs(sil - ref) << ", line "
               << line_sil;
  }
}

std::vector<Transaction> transactions_of(const std::vector<std::set<std::string>>& sets) {
  std::vector<Transaction> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Transaction t;
    t.doc_id = "t" + std::to_string(i);
    for (const auto& c : sets[i]) {
      t.concept_ids.push_back(c);
      t.evidence_span_ids.push_back(t.doc_id + "#" + c);
    }
    out.push_back(std::move(t));
  }
  return out;
}

void rule_mining(Outcome& out) {
  const auto hand = mine_rules(transactions_of({{"A", "B"}, {"A", "B"}, {"A"}, {"B"}, {"B", "C"}}), {2, 0.5});
  double ab = -1, ba = -1;
  for (const auto& r : hand) {
    if (r.antecedent == "A" && r.consequent == "B") ab = r.confidence;
    if (r.antecedent == "B" && r.consequent == "A") ba = r.confidence;
  }
  out.require(ab == 2.0 / 3.0, "conf(A=>B) = " + std::to_string(ab));
  out.require(ba == 0.5, "conf(B=>A) = " + std::to_string(ba));

  std::mt19937_64 gen(103);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::set<std::string>> sets(10 + gen() % 30);
    for (auto& s : sets) {
      for (int i = 0; i < 6; ++i) {
        if (gen() % 3 == 0) s.insert("C" + std::to_string(i));
      }
    }
    const auto tx = transactions_of(sets);
    const std::size_t sup = 1 + gen() % 4;
    const double conf = static_cast<double>(1 + gen() % 7) / 8.0;
    const auto loose = mine_rules(tx, {sup, conf});
    const auto tight = mine_rules(tx, {sup + 1, conf + 0.125});
    const auto expected = oracle::all_rules(sets, sup, conf);
    std::set<std::pair<std::string, std::string>> have;
    for (const auto& r : loose) have.insert({r.antecedent, r.consequent});
    std::set<std::pair<std::string, std::string>> want;
    for (const auto& r : expected) want.insert({r.from, r.to});
    out.require(have == want, "trial " + std::to_string(trial) + " differs from brute force");
    for (const auto& r : tight) {
      out.require(have.count({r.antecedent, r.consequent}) == 1, "tightening added a rule");
    }
  }
  if (out.pass) out.detail << "hand case 2/3 and 1/2; 100 random sets match brute force and shrink monotonically";
}

void graph_soundness(Outcome& out) {
  std::size_t edges = 0, entries = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto pc = synthetic::random_pipeline_corpus(30 + seed % 20, seed);
    const auto pg = synthetic::run_pipeline(pc, 2 + seed % 3, seed);
    const auto problem = synthetic::graph_soundness_violation(pc.corpus, pg);
    out.require(problem.empty(), "seed " + std::to_string(seed) + ": " + problem);
    edges += pg.graph.edges().size();
    for (const auto& e : pg.graph.edges()) entries += e.provenance.size();
  }
  out.require(edges > 0, "random corpora produced no edges");
  if (out.pass) out.detail << "30 corpora, " << edges << " edges, " << entries << " provenance entries checked";
}

void inspiration_fixture(Outcome& out) {
  const auto bundle = harness::fixture_bundle();
  const auto* alert = harness::concept_with_surface(*bundle, bundle->purpose, "remind you every day");
  const auto* drinks = harness::concept_with_surface(*bundle, bundle->purpose, "keep tea hot");
  const auto* health = harness::concept_with_surface(*bundle, bundle->purpose, "real-time health checker");
  if (!alert || !drinks || !health) {
    out.require(false, "planted concepts missing");
    return;
  }
  out.require(alert != drinks && alert != health && drinks != health, "planted concepts merged");
  std::set<std::string> linked;
  for (const auto& n : bundle->graph.neighbors(alert->id, Direction::kOut, 0)) linked.insert(n.concept_id);
  out.require(linked.count(drinks->id) == 1, alert->id + " does not link to " + drinks->id);
  out.require(linked.count(health->id) == 1, alert->id + " does not link to " + health->id);

  const auto res = harness::run(harness::quote(harness::cli_path()) + " --format records inspire --bundle " +
                                harness::quote(harness::fixture_bundle_dir()) +
                                " --seed 'morning medicine reminder'");
  out.require(res.exit_code == 0, "inspire exited " + std::to_string(res.exit_code));
  if (res.exit_code != 0) return;
  const auto session = Json::parse(res.out);
  out.require(session["mapped_concept"] == alert->id, "seed mapped elsewhere");
  std::set<std::string> shown;
  for (const auto& box : session["boxes"]) {
    for (const auto& s : box["spans"]) shown.insert(s.get<std::string>());
  }
  out.require(shown.count("coffee alarm") == 1, "no box shows 'coffee alarm'");
  out.require(shown.count("real-time health checker") == 1, "no box shows 'real-time health checker'");
  if (out.pass) {
    out.detail << alert->id << " -> " << drinks->id << " (hot drinks), " << health->id
               << " (health); boxes show 'coffee alarm' and 'real-time health checker'";
  }
}

void textrank(Outcome& out) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_sum = 0.0;
  for (int g = 0; g < 20; ++g) {
    std::vector<std::vector<double>> w(10, std::vector<double>(10, 0.0));
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = i + 1; j < 10; ++j) {
        if (gen() % 2) w[i][j] = w[j][i] = u(gen);
      }
    }
    const auto pr = pagerank(w);
    const auto ref = oracle::pagerank(w);
    double sum = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
      worst = std::max(worst, std::abs(pr[i] - ref[i]));
      sum += pr[i];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  out.require(worst <= 1e-6, "max deviation " + std::to_string(worst));
  out.require(worst_sum <= 1e-8, "sum off by " + std::to_string(worst_sum));
  if (out.pass) out.detail << "20 graphs, max |score - oracle| " << worst << ", max |sum - 1| " << worst_sum;
}

void metrics(Outcome& out) {
  JudgedRanking r;
  r.query_id = "hand";
  r.ranked = {"a", "b", "c"};
  r.relevance = {{"a", 1}, {"b", 0}, {"c", 1}};
  const double ap = *average_precision(r);
  const double nd = *ndcg(r);
  // Hand derivation: DCG = 1 + 1/log2(4) = 1.5, IDCG = 1 + 1/log2(3).
  const double nd_ref = 1.5 / (1.0 + 1.0 / std::log2(3.0));
  out.require(std::abs(ap - 5.0 / 6.0) <= 1e-12, "AP " + std::to_string(ap));
  out.require(std::abs(nd - nd_ref) <= 1e-4, "NDCG " + std::to_string(nd));
  r.ranked = {"a", "c", "b"};
  out.require(*average_precision(r) == 1.0 && *ndcg(r) == 1.0, "perfect ranking below 1");

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    Session s;
    s.session_id = "s";
    const std::size_t boxes = 1 + gen() % 8;
    for (std::size_t b = 0; b < boxes; ++b) {
      InspirationBox box;
      box.condition = static_cast<BoxCondition>(gen() % 4);
      box.spans.assign(1 + gen() % 5, "x");
      box.display_order = b;
      s.boxes.push_back(box);
    }
    std::vector<RaterMarks> raters(1 + gen() % 4);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> votes;
    for (std::size_t i = 0; i < raters.size(); ++i) {
      raters[i].session_id = "s";
      raters[i].rater_id = "r" + std::to_string(i);
      for (std::size_t b = 0; b < boxes; ++b) {
        for (std::size_t sp = 0; sp < s.boxes[b].spans.size(); ++sp) {
          if (gen() % 2) {
            raters[i].marked.push_back({b, sp});
            ++votes[{b, sp}];
          }
        }
      }
    }
    const auto m = build_mark_matrix(s, raters);
    const auto spans = span_agreement(m);
    const auto boxes_agreed = box_agreement(m);
    std::map<std::string, std::size_t> span_ok, box_ok;
    for (std::size_t b = 0; b < boxes; ++b) {
      const std::string c = condition_name(s.boxes[b].condition);
      std::size_t good = 0;
      for (std::size_t sp = 0; sp < s.boxes[b].spans.size(); ++sp) good += votes[{b, sp}] >= 2;
      span_ok[c] += good;
      box_ok[c] += good >= 2;
    }
    for (const auto& [c, n] : span_ok) {
      out.require(spans.at(c).agreed == n && boxes_agreed.at(c).agreed == box_ok[c],
                  "mark matrix " + std::to_string(trial) + " disagrees with tally");
    }
  }
  if (out.pass) {
    out.detail << "AP " << ap << ", NDCG " << nd << " (hand derivation " << nd_ref
               << "); 50 mark matrices match brute-force tallies";
  }
}

void extraction_scorer(Outcome& out) {
  auto doc = [](std::string text, std::vector<Span> spans) {
    Document d;
    d.id = "a";
    d.text = std::move(text);
    d.spans = std::move(spans);
    validate_document(d);
    return d;
  };
  const Corpus gold({doc("heats water fast", {{SpanLabel::kPurpose, 0, 11, "", std::nullopt}})});
  const Corpus pred({doc("heats water fast", {{SpanLabel::kPurpose, 0, 5, "", std::nullopt}})});
  const double f1 = score_extraction(pred, gold).purpose.f1;
  out.require(std::abs(f1 - 2.0 / 3.0) <= 1e-12, "hand F1 " + std::to_string(f1));

  std::mt19937_64 gen(1000);
  std::size_t round_trips = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const std::size_t n = 1 + gen() % 15;
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + std::string(1 + gen() % 4, static_cast<char>('a' + gen() % 26));
    const auto tokens = tokenize(text);
    std::vector<Span> spans;
    for (std::size_t i = 0; i < tokens.size();) {
      const std::size_t len = 1 + gen() % 3;
      if (gen() % 2 == 0 || i + len > tokens.size()) {
        ++i;
        continue;
      }
      spans.push_back({gen() % 2 ? SpanLabel::kPurpose : SpanLabel::kMechanism, tokens[i].start,
                       tokens[i + len - 1].end, "", std::nullopt});
      i += len;
    }
    const auto d = doc(text, spans);
    round_trips += iob_to_spans(spans_to_iob(d), text) == d.spans;
  }
  out.require(round_trips == 1000, std::to_string(1000 - round_trips) + " codec round trips differ");

  const synthetic::LabelShares shares;
  std::mt19937_64 lg(2024);
  const auto gold_syn = synthetic::label_corpus(synthetic::draw_labels(10000, shares, lg), 100);
  const auto guess = synthetic::label_corpus(synthetic::draw_labels(10000, shares, lg), 100);
  const double got = 100.0 * score_extraction(guess, gold_syn).micro.f1;
  const double expected = 100.0 * synthetic::analytic_random_micro_f1(shares);
  out.require(std::abs(got - expected) <= 3.0, "random F1 " + std::to_string(got) + " vs " + std::to_string(expected));
  if (out.pass) {
    out.detail << "hand F1 " << f1 << "; 1000 round trips; random-guess F1 " << got << " vs analytic " << expected;
  }
}

void determinism_pipeline(Outcome& out) {
  harness::TempDir dir;
  const auto config = resolve_build_config(harness::fixture("build.json"), {});
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = build_index(config, dir.file("a"));
  const double secs = seconds_since(t0);
  const auto b = build_index(config, dir.file("b"));
  out.require(a.build_id == b.build_id, "build ids differ");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir.file("a"))) {
    const auto name = entry.path().filename().string();
    out.require(harness::slurp(entry.path().string()) == harness::slurp(dir.file("b/" + name)), name + " differs");
    ++files;
  }
  out.require(secs < 30.0, "build took " + std::to_string(secs) + " s");

  fg_bundle* handle = nullptr;
  if (fg_bundle_open(dir.file("a").c_str(), nullptr, &handle) != FG_OK) {
    out.require(false, std::string("open failed: ") + fg_last_error());
    return;
  }
  std::size_t compared = 0;
  for (const auto& sc : scenarios()) {
    Json q;
    std::string args;
    auto add = [&](const char* key, const char* flag, const std::vector<std::string>& chunks) {
      if (chunks.empty()) return;
      q[key] = chunks;
      for (const auto& c : chunks) args += std::string(" ") + flag + " " + harness::quote(c);
    };
    add("purpose", "--purpose", sc.query.purpose_pos);
    add("not_purpose", "--not-purpose", sc.query.purpose_neg);
    add("mechanism", "--mechanism", sc.query.mech_pos);
    char* api = nullptr;
    if (fg_search(handle, q.dump().c_str(), &api) != FG_OK) {
      out.require(false, std::string("fg_search failed: ") + fg_last_error());
      continue;
    }
    const auto api_json = Json::parse(api);
    fg_string_free(api);
    const auto cli = harness::run(harness::quote(harness::cli_path()) + " --format records search --bundle " +
                                  harness::quote(dir.file("a")) + args);
    std::vector<Json> lines;
    std::istringstream in(cli.out);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) lines.push_back(Json::parse(line));
    }
    out.require(cli.exit_code == 0 && lines == api_json["results"].get<std::vector<Json>>(),
                "CLI and API differ for " + q.dump());
    compared += lines.size();
  }
  fg_bundle_close(handle);
  if (out.pass) {
    out.detail << files << " bundle files byte-identical; build " << secs << " s; " << compared
               << " CLI/API results identical; no UI component built or required";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"search-oracle-equality", search_oracle_equality},
      {"negation-semantics", negation_semantics},
      {"distance-hand-cases", distance_hand_cases},
      {"clustering", clustering},
      {"rule-mining", rule_mining},
      {"graph-soundness", graph_soundness},
      {"reminder-fixture-inspiration", inspiration_fixture},
      {"textrank-pagerank", textrank},
      {"metrics", metrics},
      {"extraction-scorer", extraction_scorer},
      {"determinism-and-pipeline", determinism_pipeline},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      check(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (out.pass ? "PASS " : "FAIL ") << name << ": " << out.detail.str() << std::endl;
    failed += out.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
