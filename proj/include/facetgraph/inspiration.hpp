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

#ifndef FACETGRAPH_INSPIRATION_HPP_
#define FACETGRAPH_INSPIRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "facetgraph/clustering.hpp"
#include "facetgraph/corpus.hpp"
#include "facetgraph/embedding.hpp"
#include "facetgraph/rules.hpp"

namespace facetgraph {

struct SeedProblem {
  std::string text;
  SpanVector vector;
  std::string mapped_concept;
};

// Maps the seed to the purpose concept whose normalized centroid has the
// highest cosine with the seed embedding; ties go to the earlier concept.
SeedProblem map_seed(const std::string& text, const ConceptSet& purpose_concepts,
                     const WordVectorTable& table, const EmbedOptions& options = {});

struct GraphInspirations {
  std::vector<Neighbor> consequents;
  bool isolated = false;
};

// Top purpose->purpose consequents of the seed's concept.
GraphInspirations graph_inspirations(const SeedProblem& seed, const ConceptGraph& graph,
                                     std::size_t top_r = 3);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-8;
  std::size_t max_iterations = 100;
};

// Weighted PageRank with uniform teleport over a dense, non-negative weight
// matrix (weights[i][j] = edge i -> j). Nodes without outgoing weight spread
// their mass uniformly. Scores sum to 1.
std::vector<double> pagerank(const std::vector<std::vector<double>>& weights,
                             const PageRankOptions& options = {});

enum class TextRankWeight { kCosine, kLexical };

struct SpanSummary {
  std::vector<std::string> spans;     // deduplicated surfaces, best first
  std::vector<std::string> span_ids;  // the span each surface came from
  std::vector<double> scores;
  bool shortfall = false;  // fewer than k distinct surfaces available
};

struct SummaryContext {
  const Corpus* corpus = nullptr;
  const SpanEmbeddings* embeddings = nullptr;
};

// Top-k members by PageRank over the member similarity graph
// (edge weight max(0, cosine), or token Jaccard for kLexical).
// Surfaces equal to `exclude_surface` (case- and space-insensitive) are skipped.
SpanSummary summarize_textrank(const Concept& concept_, const SummaryContext& ctx, std::size_t k = 5,
                               TextRankWeight weight = TextRankWeight::kCosine,
                               std::string_view exclude_surface = {},
                               const PageRankOptions& options = {});

// Top-k members by cosine to the seed vector.
SpanSummary summarize_nearest(const Concept& concept_, const SpanVector& seed,
                              const SummaryContext& ctx, std::size_t k = 5,
                              std::string_view exclude_surface = {});

// Lowercased, trimmed, inner whitespace collapsed; the key used for surface
// deduplication and seed exclusion.
std::string surface_key(std::string_view surface);

// Corpus-wide nearest purpose spans, skipping surfaces equal to the seed.
// `offset` skips that many distinct surfaces first.
SpanSummary baseline_span_similarity(const SeedProblem& seed, const SummaryContext& ctx,
                                     std::size_t k = 5, std::size_t offset = 0);

enum class BoxCondition {
  kGraphTextRank,
  kGraphNearest,
  kBaselineSpanSim,
  kBaselineRandom,
  kLinguisticAbstraction,
};
const char* condition_name(BoxCondition c);
BoxCondition parse_condition(std::string_view name);

struct InspirationBox {
  BoxCondition condition = BoxCondition::kGraphTextRank;
  std::size_t variant = 0;
  std::optional<std::string> concept_id;
  std::vector<std::string> spans;
  std::vector<std::string> span_ids;
  std::size_t display_order = 0;
  bool shortfall = false;
  bool fallback = false;      // graph condition served by span similarity
  std::string error;          // non-empty for a failed condition (box is empty)
};

// Draws `count` purpose concepts uniformly (without replacement while
// possible) and summarizes each with TextRank.
std::vector<InspirationBox> baseline_random(const ConceptSet& purpose_concepts,
                                            const SummaryContext& ctx, std::uint64_t rng_seed,
                                            std::size_t k = 5, std::size_t count = 1);

struct SessionConfig {
  std::vector<BoxCondition> conditions = {BoxCondition::kGraphTextRank, BoxCondition::kGraphNearest,
                                          BoxCondition::kBaselineSpanSim,
                                          BoxCondition::kBaselineRandom};
  std::size_t variants = 2;
  std::size_t k = 5;
  std::size_t top_r = 3;
  std::uint64_t rng_seed = 7;
  std::string session_id;  // derived from the seed text and rng seed when empty
  TextRankWeight textrank_weight = TextRankWeight::kCosine;
  // Optional seed -> spans table for the linguistic-abstraction slot.
  std::map<std::string, std::vector<std::string>> abstractions;
};

struct Session {
  std::string session_id;
  std::string seed;
  std::string mapped_concept;
  bool graph_fallback = false;
  std::vector<InspirationBox> boxes;  // in display order
};

struct InspirationSources {
  const Corpus* corpus = nullptr;
  const SpanEmbeddings* embeddings = nullptr;
  const ConceptSet* purpose_concepts = nullptr;
  const ConceptGraph* graph = nullptr;
  const WordVectorTable* table = nullptr;
  EmbedOptions embed_options;
};

// Assembles conditions x variants boxes, then shuffles them with the session
// seed. A failing condition yields a flagged empty box.
Session generate_session(const std::string& seed_text, const InspirationSources& sources,
                         const SessionConfig& config);

std::string session_to_json(const Session& session);
Session session_from_json(const std::string& json);

// Seed -> spans table, one record {seed, spans:[...]} per line.
std::map<std::string, std::vector<std::string>> load_abstractions(const std::string& path);

}  // namespace facetgraph

#endif  // FACETGRAPH_INSPIRATION_HPP_
