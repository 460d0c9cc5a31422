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

#include "facetgraph/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "facetgraph/error.hpp"

namespace facetgraph {
namespace {

double clamp_distance(double d) { return std::clamp(d, 0.0, 2.0); }

// Normalized mean of the non-OOV vectors; empty when there are none.
Vec normalized_mean(std::span<const SpanVector> vectors) {
  Vec mean;
  for (const auto& v : vectors) {
    if (v.oov) continue;
    if (mean.empty()) mean.assign(v.values.size(), 0.0);
    for (std::size_t i = 0; i < v.values.size(); ++i) mean[i] += v.values[i];
  }
  if (mean.empty() || !normalize_in_place(mean)) return {};
  return mean;
}

bool less_result(const SearchResult& a, const SearchResult& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.doc_id < b.doc_id;
}

std::vector<SpanVector> embed_chunks(const std::vector<std::string>& chunks,
                                     const WordVectorTable& table, const EmbedOptions& options) {
  std::vector<SpanVector> out;
  out.reserve(chunks.size());
  for (const auto& chunk : chunks) {
    auto v = embed_text(chunk, table, options);
    if (v.oov) {
      throw Error(ErrorCode::kInvalidArgument, "search",
                  "query chunk '" + chunk + "' has no in-vocabulary tokens");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

const char* method_name(SearchMethod method) {
  return method == SearchMethod::kAvg ? "avg" : "maxmin";
}

SearchMethod parse_method(std::string_view name) {
  if (name == "avg" || name == "AVG") return SearchMethod::kAvg;
  if (name == "maxmin" || name == "MAXMIN") return SearchMethod::kMaxMin;
  throw Error(ErrorCode::kInvalidArgument, "search", "unknown method '" + std::string(name) + "'");
}

const char* combine_name(CombineMode mode) {
  switch (mode) {
    case CombineMode::kMean: return "mean";
    case CombineMode::kSum: return "sum";
    case CombineMode::kPurposeOnly: return "purpose-only";
  }
  return "mean";
}

CombineMode parse_combine(std::string_view name) {
  if (name == "mean") return CombineMode::kMean;
  if (name == "sum") return CombineMode::kSum;
  if (name == "purpose-only") return CombineMode::kPurposeOnly;
  throw Error(ErrorCode::kInvalidArgument, "search", "unknown combine mode '" + std::string(name) + "'");
}

std::optional<double> distance_avg(std::span<const SpanVector> query,
                                   std::span<const SpanVector> spans) {
  const Vec q = normalized_mean(query);
  const Vec s = normalized_mean(spans);
  if (q.empty() || s.empty()) return std::nullopt;
  return clamp_distance(1.0 - dot(q, s));
}

std::optional<double> distance_maxmin(std::span<const SpanVector> query,
                                      std::span<const SpanVector> spans) {
  double worst = std::numeric_limits<double>::infinity();
  bool any_query = false;
  for (const auto& q : query) {
    if (q.oov) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : spans) {
      if (!s.oov) best = std::max(best, dot(q.values, s.values));
    }
    if (!std::isfinite(best)) return std::nullopt;
    worst = std::min(worst, best);
    any_query = true;
  }
  if (!any_query) return std::nullopt;
  return clamp_distance(1.0 - worst);
}

std::optional<double> facet_distance(SearchMethod method, std::span<const SpanVector> query,
                                     std::span<const SpanVector> spans) {
  return method == SearchMethod::kAvg ? distance_avg(query, spans) : distance_maxmin(query, spans);
}

ProductIndex::ProductIndex(const Corpus& corpus, const SpanEmbeddings& embeddings) {
  entries_.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.at(d);
    ProductIndexEntry entry;
    entry.doc_id = doc.id;
    for (std::size_t s = 0; s < doc.spans.size(); ++s) {
      const auto& v = embeddings.at({d, s});
      if (doc.spans[s].label == SpanLabel::kPurpose) {
        entry.purpose_vectors.push_back(v);
        entry.purpose_spans.push_back(s);
      } else {
        entry.mechanism_vectors.push_back(v);
        entry.mechanism_spans.push_back(s);
      }
    }
    entries_.push_back(std::move(entry));
  }
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "search", "percentile of empty set");
  std::sort(values.begin(), values.end());
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

NegativeFilter negative_filter(const ProductIndex& index, std::span<const SpanVector> negated,
                               SpanLabel side, double neg_percentile, SearchMethod method) {
  if (negated.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "search", "negative filter needs at least one chunk");
  }
  if (!(neg_percentile > 0.0 && neg_percentile <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "search", "neg_percentile must lie in (0, 100]");
  }
  NegativeFilter filter;
  filter.allowed.assign(index.size(), true);
  std::vector<double> distances(index.size());
  for (const auto& chunk : negated) {
    for (std::size_t i = 0; i < index.size(); ++i) {
      distances[i] = facet_distance(method, std::span<const SpanVector>(&chunk, 1),
                                    index.entries()[i].side(side))
                         .value_or(kUnmatchedDistance);
    }
    const double threshold = percentile(distances, 100.0 - neg_percentile);
    filter.thresholds.push_back(threshold);
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (distances[i] < threshold) filter.allowed[i] = false;
    }
  }
  filter.over_constrained =
      std::none_of(filter.allowed.begin(), filter.allowed.end(), [](bool b) { return b; });
  return filter;
}

EmbeddedQuery embed_query(const FacetQuery& query, const WordVectorTable& table,
                          const EmbedOptions& options) {
  if (query.purpose_pos.empty() && query.mech_pos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "search", "query needs at least one positive chunk");
  }
  if (query.limit == 0) throw Error(ErrorCode::kInvalidArgument, "search", "limit must be >= 1");
  EmbeddedQuery e;
  e.purpose_pos = embed_chunks(query.purpose_pos, table, options);
  e.purpose_neg = embed_chunks(query.purpose_neg, table, options);
  e.mech_pos = embed_chunks(query.mech_pos, table, options);
  e.mech_neg = embed_chunks(query.mech_neg, table, options);
  return e;
}

SearchResponse search(const FacetQuery& query, const EmbeddedQuery& embedded,
                      const ProductIndex& index) {
  if (index.empty()) throw Error(ErrorCode::kInvalidArgument, "search", "index is empty");
  if (embedded.purpose_pos.empty() && embedded.mech_pos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "search", "query needs at least one positive chunk");
  }
  std::vector<bool> allowed(index.size(), true);
  bool over_constrained = false;
  auto apply = [&](const std::vector<SpanVector>& negated, SpanLabel side) {
    if (negated.empty()) return;
    const auto f = negative_filter(index, negated, side, query.neg_percentile, query.method);
    for (std::size_t i = 0; i < allowed.size(); ++i) allowed[i] = allowed[i] && f.allowed[i];
  };
  apply(embedded.purpose_neg, SpanLabel::kPurpose);
  apply(embedded.mech_neg, SpanLabel::kMechanism);

  SearchResponse response;
  response.candidates = static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), true));
  if (response.candidates == 0) {
    over_constrained = true;
    response.over_constrained = over_constrained;
    return response;
  }

  const bool has_p = !embedded.purpose_pos.empty();
  const bool has_m = !embedded.mech_pos.empty();
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!allowed[i]) continue;
    const auto& entry = index.entries()[i];
    SearchResult r;
    r.doc_id = entry.doc_id;
    if (has_p) {
      r.purpose_distance = facet_distance(query.method, embedded.purpose_pos, entry.purpose_vectors)
                               .value_or(kUnmatchedDistance);
    }
    if (has_m) {
      r.mechanism_distance = facet_distance(query.method, embedded.mech_pos, entry.mechanism_vectors)
                                 .value_or(kUnmatchedDistance);
    }
    switch (query.combine) {
      case CombineMode::kMean:
        r.score = has_p && has_m ? (*r.purpose_distance + *r.mechanism_distance) / 2.0
                                 : (has_p ? *r.purpose_distance : *r.mechanism_distance);
        break;
      case CombineMode::kSum:
        r.score = r.purpose_distance.value_or(0.0) + r.mechanism_distance.value_or(0.0);
        break;
      case CombineMode::kPurposeOnly:
        r.score = has_p ? *r.purpose_distance : *r.mechanism_distance;
        break;
    }
    auto add_matches = [&](const std::vector<std::string>& chunks,
                           const std::vector<SpanVector>& vecs, SpanLabel side) {
      const auto& spans = entry.side(side);
      const auto& ids = entry.side_spans(side);
      for (std::size_t c = 0; c < chunks.size(); ++c) {
        ChunkMatch m;
        m.chunk = chunks[c];
        m.side = side;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < spans.size(); ++s) {
          if (spans[s].oov) continue;
          const double sim = dot(vecs[c].values, spans[s].values);
          if (sim > best) {
            best = sim;
            m.span_id = span_id(entry.doc_id, ids[s]);
          }
        }
        m.similarity = m.span_id ? best : 0.0;
        r.matched_spans.push_back(std::move(m));
      }
    };
    add_matches(query.purpose_pos, embedded.purpose_pos, SpanLabel::kPurpose);
    add_matches(query.mech_pos, embedded.mech_pos, SpanLabel::kMechanism);
    response.results.push_back(std::move(r));
  }
  std::sort(response.results.begin(), response.results.end(), less_result);
  if (response.results.size() > query.limit) response.results.resize(query.limit);
  return response;
}

SearchResponse search(const FacetQuery& query, const ProductIndex& index,
                      const WordVectorTable& table, const EmbedOptions& options) {
  const auto embedded = embed_query(query, table, options);
  return search(query, embedded, index);
}

std::vector<SearchResult> search_document_average(const FacetQuery& query, const Corpus& corpus,
                                                  const WordVectorTable& table,
                                                  const EmbedOptions& options) {
  std::vector<SpanVector> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    docs.push_back(embed_text(doc.title + " " + doc.text, table, options));
  }
  auto doc_distance = [&](const SpanVector& q, std::size_t d) {
    return docs[d].oov ? kUnmatchedDistance : clamp_distance(1.0 - dot(q.values, docs[d].values));
  };
  std::vector<bool> allowed(corpus.size(), true);
  std::vector<std::string> negated = query.purpose_neg;
  negated.insert(negated.end(), query.mech_neg.begin(), query.mech_neg.end());
  for (const auto& v : embed_chunks(negated, table, options)) {
    std::vector<double> dist(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) dist[d] = doc_distance(v, d);
    const double threshold = percentile(dist, 100.0 - query.neg_percentile);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      if (dist[d] < threshold) allowed[d] = false;
    }
  }
  std::string positive;
  for (const auto* side : {&query.purpose_pos, &query.mech_pos}) {
    for (const auto& chunk : *side) positive += chunk + " ";
  }
  const auto q = embed_text(positive, table, options);
  if (q.oov) throw Error(ErrorCode::kInvalidArgument, "search", "query has no in-vocabulary tokens");
  std::vector<SearchResult> results;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (!allowed[d]) continue;
    SearchResult r;
    r.doc_id = corpus.at(d).id;
    r.score = doc_distance(q, d);
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), less_result);
  if (results.size() > query.limit) results.resize(query.limit);
  return results;
}

}  // namespace facetgraph
