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

#ifndef FACETGRAPH_SEARCH_HPP_
#define FACETGRAPH_SEARCH_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facetgraph/corpus.hpp"
#include "facetgraph/embedding.hpp"

namespace facetgraph {

enum class SearchMethod { kAvg, kMaxMin };
enum class CombineMode { kMean, kSum, kPurposeOnly };

const char* method_name(SearchMethod method);
SearchMethod parse_method(std::string_view name);
const char* combine_name(CombineMode mode);
CombineMode parse_combine(std::string_view name);

// Distances between a query set and a span set, in [0, 2]. Zero (OOV)
// vectors are ignored on both sides; nullopt when either side has no usable
// vector.
std::optional<double> distance_avg(std::span<const SpanVector> query,
                                   std::span<const SpanVector> spans);
// 1 - min over query vectors of the best dot product against the span set.
std::optional<double> distance_maxmin(std::span<const SpanVector> query,
                                      std::span<const SpanVector> spans);
std::optional<double> facet_distance(SearchMethod method, std::span<const SpanVector> query,
                                     std::span<const SpanVector> spans);

// Distance used when a product side cannot be compared at all.
inline constexpr double kUnmatchedDistance = 2.0;

struct ProductIndexEntry {
  std::string doc_id;
  std::vector<SpanVector> purpose_vectors;
  std::vector<std::size_t> purpose_spans;  // indices into Document::spans
  std::vector<SpanVector> mechanism_vectors;
  std::vector<std::size_t> mechanism_spans;

  const std::vector<SpanVector>& side(SpanLabel label) const {
    return label == SpanLabel::kPurpose ? purpose_vectors : mechanism_vectors;
  }
  const std::vector<std::size_t>& side_spans(SpanLabel label) const {
    return label == SpanLabel::kPurpose ? purpose_spans : mechanism_spans;
  }
};

class ProductIndex {
 public:
  ProductIndex() = default;
  ProductIndex(const Corpus& corpus, const SpanEmbeddings& embeddings);
  explicit ProductIndex(std::vector<ProductIndexEntry> entries) : entries_(std::move(entries)) {}

  const std::vector<ProductIndexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<ProductIndexEntry> entries_;
};

struct FacetQuery {
  std::vector<std::string> purpose_pos;
  std::vector<std::string> purpose_neg;
  std::vector<std::string> mech_pos;
  std::vector<std::string> mech_neg;
  SearchMethod method = SearchMethod::kAvg;
  double neg_percentile = 90.0;
  std::size_t limit = 20;
  CombineMode combine = CombineMode::kMean;
};

// Linear-interpolation percentile (p in [0, 100]) of unsorted values.
double percentile(std::vector<double> values, double p);

struct NegativeFilter {
  std::vector<bool> allowed;  // parallel to index entries
  std::vector<double> thresholds;  // one per negated chunk
  bool over_constrained = false;
};

// For every negated chunk, keep products whose distance is at least the
// (100 - neg_percentile)th percentile of that chunk's distances over the whole
// index; chunks intersect.
NegativeFilter negative_filter(const ProductIndex& index, std::span<const SpanVector> negated,
                               SpanLabel side, double neg_percentile, SearchMethod method);

struct ChunkMatch {
  std::string chunk;
  SpanLabel side = SpanLabel::kPurpose;
  std::optional<std::string> span_id;
  double similarity = 0.0;
};

struct SearchResult {
  std::string doc_id;
  double score = 0.0;  // lower is better
  std::optional<double> purpose_distance;
  std::optional<double> mechanism_distance;
  std::vector<ChunkMatch> matched_spans;
};

struct SearchResponse {
  std::vector<SearchResult> results;
  std::size_t candidates = 0;
  bool over_constrained = false;
};

// Validates the query and embeds its chunks. Throws on a query with no
// positive chunk or with a chunk that has no in-vocabulary token.
struct EmbeddedQuery {
  std::vector<SpanVector> purpose_pos, purpose_neg, mech_pos, mech_neg;
};
EmbeddedQuery embed_query(const FacetQuery& query, const WordVectorTable& table,
                          const EmbedOptions& options = {});

SearchResponse search(const FacetQuery& query, const EmbeddedQuery& embedded,
                      const ProductIndex& index);
SearchResponse search(const FacetQuery& query, const ProductIndex& index,
                      const WordVectorTable& table, const EmbedOptions& options = {});

// Whole-text average baseline, used only by the evaluation harness. Each
// document is one vector (title + text); negations filter by the same
// percentile rule.
std::vector<SearchResult> search_document_average(const FacetQuery& query, const Corpus& corpus,
                                                  const WordVectorTable& table,
                                                  const EmbedOptions& options = {});

}  // namespace facetgraph

#endif  // FACETGRAPH_SEARCH_HPP_
