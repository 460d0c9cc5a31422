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

#include "facetgraph/inspiration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include "facetgraph/digest.hpp"
#include "facetgraph/error.hpp"
#include "facetgraph/rng.hpp"
#include "json.hpp"

namespace facetgraph {
namespace {

using ordered_json = nlohmann::ordered_json;

const Concept* find_concept(const ConceptSet& set, const std::string& id) {
  for (const auto& c : set.concepts) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::set<std::string> content_tokens(std::string_view text) {
  std::set<std::string> out;
  for (const auto& t : tokenize(text)) {
    auto key = ascii_lower(t.surface);
    if (!is_stopword(key)) out.insert(std::move(key));
  }
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Walks candidates in ranked order, deduplicating by surface key.
SpanSummary take_top(const std::vector<SpanRef>& ranked, const std::vector<double>& scores,
                     const Corpus& corpus, std::size_t k, std::string_view exclude,
                     std::size_t offset = 0) {
  SpanSummary out;
  std::unordered_set<std::string> seen;
  const std::string excluded = exclude.empty() ? std::string() : surface_key(exclude);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < ranked.size() && out.spans.size() < k; ++i) {
    const auto& span = corpus.span(ranked[i]);
    const auto key = surface_key(span.surface);
    if (!excluded.empty() && key == excluded) continue;
    if (!seen.insert(key).second) continue;
    if (skipped < offset) {
      ++skipped;
      continue;
    }
    out.spans.push_back(span.surface);
    out.span_ids.push_back(corpus.span_id(ranked[i]));
    out.scores.push_back(scores[i]);
  }
  out.shortfall = out.spans.size() < k;
  return out;
}

void require_context(const SummaryContext& ctx) {
  if (ctx.corpus == nullptr || ctx.embeddings == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "inspire", "summary context is incomplete");
  }
}

}  // namespace

std::string surface_key(std::string_view surface) {
  std::string out;
  bool pending_space = false;
  for (char c : surface) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

SeedProblem map_seed(const std::string& text, const ConceptSet& purpose_concepts,
                     const WordVectorTable& table, const EmbedOptions& options) {
  if (purpose_concepts.kind != SpanLabel::kPurpose || purpose_concepts.concepts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "map_seed", "no purpose concepts available");
  }
  SeedProblem seed;
  seed.text = text;
  seed.vector = embed_text(text, table, options);
  if (seed.vector.oov) {
    throw Error(ErrorCode::kInvalidArgument, "map_seed",
                "seed '" + text + "' has no in-vocabulary tokens");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : purpose_concepts.concepts) {
    const double sim = cosine(seed.vector.values, c.centroid);
    if (sim > best) {
      best = sim;
      seed.mapped_concept = c.id;
    }
  }
  return seed;
}

GraphInspirations graph_inspirations(const SeedProblem& seed, const ConceptGraph& graph,
                                     std::size_t top_r) {
  GraphInspirations out;
  for (const auto& n : graph.neighbors(seed.mapped_concept, Direction::kOut, 0)) {
    const auto* node = graph.node(n.concept_id);
    if (node == nullptr || node->kind != SpanLabel::kPurpose) continue;
    if (n.concept_id == seed.mapped_concept) continue;
    if (out.consequents.size() >= top_r) break;
    out.consequents.push_back(n);
  }
  out.isolated = out.consequents.empty();
  return out;
}

std::vector<double> pagerank(const std::vector<std::vector<double>>& weights,
                             const PageRankOptions& options) {
  const std::size_t n = weights.size();
  if (n == 0) return {};
  std::vector<double> out_weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i].size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "pagerank", "weight matrix is not square");
    }
    for (double w : weights[i]) {
      if (w < 0.0) throw Error(ErrorCode::kInvalidArgument, "pagerank", "negative edge weight");
      out_weight[i] += w;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] == 0.0) dangling += rank[i];
    }
    const double base = (1.0 - options.damping) * inv_n + options.damping * dangling * inv_n;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] == 0.0) continue;
      const double share = options.damping * rank[i] / out_weight[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += share * weights[i][j];
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (delta < options.tolerance) break;
  }
  return rank;
}

SpanSummary summarize_textrank(const Concept& concept_, const SummaryContext& ctx, std::size_t k,
                               TextRankWeight weight, std::string_view exclude_surface,
                               const PageRankOptions& options) {
  require_context(ctx);
  const auto& members = concept_.members;
  const std::size_t n = members.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  std::vector<std::set<std::string>> tokens;
  if (weight == TextRankWeight::kLexical) {
    for (const auto& m : members) tokens.push_back(content_tokens(ctx.corpus->span(m).surface));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sim = weight == TextRankWeight::kCosine
                             ? cosine(ctx.embeddings->at(members[i]).values,
                                      ctx.embeddings->at(members[j]).values)
                             : jaccard(tokens[i], tokens[j]);
      w[i][j] = w[j][i] = std::max(0.0, sim);
    }
  }
  const auto scores = pagerank(w, options);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<SpanRef> ranked;
  std::vector<double> ranked_scores;
  for (auto i : order) {
    ranked.push_back(members[i]);
    ranked_scores.push_back(scores[i]);
  }
  return take_top(ranked, ranked_scores, *ctx.corpus, k, exclude_surface);
}

SpanSummary summarize_nearest(const Concept& concept_, const SpanVector& seed,
                              const SummaryContext& ctx, std::size_t k,
                              std::string_view exclude_surface) {
  require_context(ctx);
  const auto& members = concept_.members;
  std::vector<double> sims(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    sims[i] = cosine(seed.values, ctx.embeddings->at(members[i]).values);
  }
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
  std::vector<SpanRef> ranked;
  std::vector<double> scores;
  for (auto i : order) {
    ranked.push_back(members[i]);
    scores.push_back(sims[i]);
  }
  return take_top(ranked, scores, *ctx.corpus, k, exclude_surface);
}

SpanSummary baseline_span_similarity(const SeedProblem& seed, const SummaryContext& ctx,
                                     std::size_t k, std::size_t offset) {
  require_context(ctx);
  const auto refs = ctx.corpus->spans_of(SpanLabel::kPurpose);
  if (refs.size() < k) {
    throw Error(ErrorCode::kValidation, "baseline_span_sim",
                "corpus has " + std::to_string(refs.size()) + " purpose spans, fewer than k = " +
                    std::to_string(k));
  }
  std::vector<SpanRef> usable;
  std::vector<double> sims;
  for (const auto& ref : refs) {
    const auto& v = ctx.embeddings->at(ref);
    if (v.oov) continue;
    usable.push_back(ref);
    sims.push_back(dot(seed.vector.values, v.values));
  }
  std::vector<std::size_t> order(usable.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
  std::vector<SpanRef> ranked;
  std::vector<double> scores;
  for (auto i : order) {
    ranked.push_back(usable[i]);
    scores.push_back(sims[i]);
  }
  return take_top(ranked, scores, *ctx.corpus, k, seed.text, offset);
}

const char* condition_name(BoxCondition c) {
  switch (c) {
    case BoxCondition::kGraphTextRank: return "graph_textrank";
    case BoxCondition::kGraphNearest: return "graph_nearest";
    case BoxCondition::kBaselineSpanSim: return "baseline_span_sim";
    case BoxCondition::kBaselineRandom: return "baseline_random";
    case BoxCondition::kLinguisticAbstraction: return "linguistic_abstraction";
  }
  return "graph_textrank";
}

BoxCondition parse_condition(std::string_view name) {
  if (name == "graph_textrank") return BoxCondition::kGraphTextRank;
  if (name == "graph_nearest") return BoxCondition::kGraphNearest;
  if (name == "baseline_span_sim") return BoxCondition::kBaselineSpanSim;
  if (name == "baseline_random") return BoxCondition::kBaselineRandom;
  if (name == "linguistic_abstraction") return BoxCondition::kLinguisticAbstraction;
  throw Error(ErrorCode::kInvalidArgument, "inspire", "unknown condition '" + std::string(name) + "'");
}

std::vector<InspirationBox> baseline_random(const ConceptSet& purpose_concepts,
                                            const SummaryContext& ctx, std::uint64_t rng_seed,
                                            std::size_t k, std::size_t count) {
  const std::size_t c = purpose_concepts.concepts.size();
  if (c == 0) throw Error(ErrorCode::kInvalidArgument, "baseline_random", "no purpose concepts");
  Rng rng(rng_seed);
  std::vector<std::size_t> pool;
  std::vector<InspirationBox> boxes;
  for (std::size_t v = 0; v < count; ++v) {
    if (pool.empty()) {
      pool.resize(c);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    const std::size_t pick = rng.below(pool.size());
    const auto& concept_ = purpose_concepts.concepts[pool[pick]];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    InspirationBox box;
    box.condition = BoxCondition::kBaselineRandom;
    box.variant = v;
    box.concept_id = concept_.id;
    auto summary = summarize_textrank(concept_, ctx, k);
    box.spans = std::move(summary.spans);
    box.span_ids = std::move(summary.span_ids);
    box.shortfall = summary.shortfall;
    boxes.push_back(std::move(box));
  }
  return boxes;
}

Session generate_session(const std::string& seed_text, const InspirationSources& sources,
                         const SessionConfig& config) {
  if (sources.corpus == nullptr || sources.embeddings == nullptr ||
      sources.purpose_concepts == nullptr || sources.graph == nullptr || sources.table == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "inspire", "inspiration sources are incomplete");
  }
  const SummaryContext ctx{sources.corpus, sources.embeddings};
  Session session;
  session.seed = seed_text;
  session.session_id = config.session_id.empty()
                           ? "s-" + sha256_hex(seed_text + "\n" + std::to_string(config.rng_seed))
                                        .substr(0, 16)
                           : config.session_id;

  const SeedProblem seed =
      map_seed(seed_text, *sources.purpose_concepts, *sources.table, sources.embed_options);
  session.mapped_concept = seed.mapped_concept;
  const auto graph = graph_inspirations(seed, *sources.graph, config.top_r);

  auto fill = [](InspirationBox& box, SpanSummary summary) {
    box.spans = std::move(summary.spans);
    box.span_ids = std::move(summary.span_ids);
    box.shortfall = summary.shortfall;
  };
  auto span_sim_box = [&](InspirationBox& box, std::size_t variant) {
    fill(box, baseline_span_similarity(seed, ctx, config.k, variant * config.k));
  };

  std::vector<InspirationBox> boxes;
  for (const auto condition : config.conditions) {
    std::vector<InspirationBox> random_boxes;
    if (condition == BoxCondition::kBaselineRandom) {
      try {
        random_boxes = baseline_random(*sources.purpose_concepts, ctx, config.rng_seed, config.k,
                                       config.variants);
        for (auto& b : random_boxes) {
          auto* concept_ = find_concept(*sources.purpose_concepts, *b.concept_id);
          fill(b, summarize_textrank(*concept_, ctx, config.k, config.textrank_weight, seed_text));
        }
      } catch (const Error& e) {
        random_boxes.clear();
        for (std::size_t v = 0; v < config.variants; ++v) {
          InspirationBox box;
          box.condition = condition;
          box.variant = v;
          box.error = e.what();
          random_boxes.push_back(std::move(box));
        }
      }
      for (auto& b : random_boxes) boxes.push_back(std::move(b));
      continue;
    }
    for (std::size_t v = 0; v < config.variants; ++v) {
      InspirationBox box;
      box.condition = condition;
      box.variant = v;
      try {
        switch (condition) {
          case BoxCondition::kGraphTextRank:
          case BoxCondition::kGraphNearest: {
            if (v >= graph.consequents.size()) {
              box.fallback = true;
              session.graph_fallback = session.graph_fallback || graph.isolated;
              span_sim_box(box, v);
              break;
            }
            const auto& target = graph.consequents[v].concept_id;
            const Concept* concept_ = find_concept(*sources.purpose_concepts, target);
            if (concept_ == nullptr) {
              throw Error(ErrorCode::kNotFound, "inspire", "concept " + target + " missing");
            }
            box.concept_id = target;
            fill(box, condition == BoxCondition::kGraphTextRank
                          ? summarize_textrank(*concept_, ctx, config.k, config.textrank_weight,
                                               seed_text)
                          : summarize_nearest(*concept_, seed.vector, ctx, config.k, seed_text));
            break;
          }
          case BoxCondition::kBaselineSpanSim:
            span_sim_box(box, v);
            break;
          case BoxCondition::kLinguisticAbstraction: {
            auto it = config.abstractions.find(seed_text);
            if (it == config.abstractions.end()) {
              throw Error(ErrorCode::kNotFound, "inspire", "no abstractions supplied for seed");
            }
            const auto excluded = surface_key(seed_text);
            std::unordered_set<std::string> seen;
            const std::size_t begin = v * config.k;
            std::size_t distinct = 0;
            for (const auto& s : it->second) {
              const auto key = surface_key(s);
              if (key == excluded || !seen.insert(key).second) continue;
              if (distinct++ < begin) continue;
              if (box.spans.size() < config.k) box.spans.push_back(s);
            }
            box.shortfall = box.spans.size() < config.k;
            break;
          }
          case BoxCondition::kBaselineRandom:
            break;
        }
      } catch (const Error& e) {
        box.spans.clear();
        box.span_ids.clear();
        box.error = e.what();
      }
      boxes.push_back(std::move(box));
    }
  }

  Rng rng(config.rng_seed);
  shuffle_in_place(boxes, rng);
  for (std::size_t i = 0; i < boxes.size(); ++i) boxes[i].display_order = i;
  session.boxes = std::move(boxes);
  return session;
}

std::string session_to_json(const Session& session) {
  ordered_json j;
  j["session_id"] = session.session_id;
  j["seed"] = session.seed;
  j["mapped_concept"] = session.mapped_concept;
  j["graph_fallback"] = session.graph_fallback;
  auto boxes = ordered_json::array();
  for (const auto& b : session.boxes) {
    ordered_json box;
    box["condition"] = condition_name(b.condition);
    box["variant"] = b.variant;
    box["concept_id"] = b.concept_id ? ordered_json(*b.concept_id) : ordered_json(nullptr);
    box["spans"] = b.spans;
    box["span_ids"] = b.span_ids;
    box["display_order"] = b.display_order;
    box["shortfall"] = b.shortfall;
    box["fallback"] = b.fallback;
    if (!b.error.empty()) box["error"] = b.error;
    boxes.push_back(std::move(box));
  }
  j["boxes"] = std::move(boxes);
  return j.dump();
}

Session session_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Session s;
    s.session_id = j.at("session_id").get<std::string>();
    s.seed = j.at("seed").get<std::string>();
    s.mapped_concept = j.value("mapped_concept", std::string());
    s.graph_fallback = j.value("graph_fallback", false);
    for (const auto& b : j.at("boxes")) {
      InspirationBox box;
      box.condition = parse_condition(b.at("condition").get<std::string>());
      box.variant = b.value("variant", std::size_t{0});
      if (b.contains("concept_id") && !b.at("concept_id").is_null()) {
        box.concept_id = b.at("concept_id").get<std::string>();
      }
      box.spans = b.at("spans").get<std::vector<std::string>>();
      if (b.contains("span_ids")) box.span_ids = b.at("span_ids").get<std::vector<std::string>>();
      box.display_order = b.at("display_order").get<std::size_t>();
      box.shortfall = b.value("shortfall", false);
      box.fallback = b.value("fallback", false);
      box.error = b.value("error", std::string());
      s.boxes.push_back(std::move(box));
    }
    std::sort(s.boxes.begin(), s.boxes.end(), [](const auto& a, const auto& b) {
      return a.display_order < b.display_order;
    });
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "session", std::string("malformed session record: ") + e.what());
  }
}

std::map<std::string, std::vector<std::string>> load_abstractions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "inspire", "cannot open abstraction file '" + path + "'");
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto& spans = out[j.at("seed").get<std::string>()];
      for (const auto& s : j.at("spans")) spans.push_back(s.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "inspire",
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace facetgraph
