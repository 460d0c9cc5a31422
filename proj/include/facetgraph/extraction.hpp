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

#ifndef FACETGRAPH_EXTRACTION_HPP_
#define FACETGRAPH_EXTRACTION_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facetgraph/corpus.hpp"

namespace facetgraph {

enum class IobTag { kOutside, kBeginPurpose, kInsidePurpose, kBeginMechanism, kInsideMechanism };

const char* iob_name(IobTag tag);
IobTag parse_iob(std::string_view name);
// nullopt for kOutside.
std::optional<SpanLabel> iob_label(IobTag tag);

struct TokenLabelSequence {
  std::vector<Token> tokens;
  std::vector<IobTag> labels;
};

// Each span becomes B-X I-X...; a token covered by several spans takes the
// purpose span first, then the one starting earliest.
TokenLabelSequence spans_to_iob(const Document& doc);

// Maximal B/I runs become spans. A stray I-X is read as B-X and counted in
// `repairs`.
std::vector<Span> iob_to_spans(const TokenLabelSequence& sequence, std::string_view text,
                               std::size_t* repairs = nullptr);

struct ScoredPrediction {
  Span span;
  double confidence = 0.0;
};

// Cue-word extractor used when no trained model is available.
std::vector<ScoredPrediction> heuristic_extract(std::string_view text);
// Replaces every document's spans with heuristic predictions (source = heuristic).
Corpus heuristic_extract_corpus(const Corpus& corpus);

struct ClassScore {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ClassScore make_score(std::size_t tp, std::size_t fp, std::size_t fn);

struct ExtractionReport {
  // Token level, B and I pooled per class.
  ClassScore purpose;
  ClassScore mechanism;
  ClassScore micro;
  // Exact (label, start, end) matches after token alignment.
  ClassScore span_exact;
  std::size_t tokens = 0;
  std::size_t documents = 0;
};

ExtractionReport score_extraction(const Corpus& predicted, const Corpus& gold);

struct RankedPrediction {
  std::string doc_id;
  Span span;
  double confidence = 0.0;
};

// Spans of a prediction corpus in document order; a missing confidence reads
// as 1.0.
std::vector<RankedPrediction> collect_predictions(const Corpus& predicted);

struct PrecisionAtK {
  double value = 0.0;
  std::size_t effective_k = 0;
};

// A prediction is correct when its token set has Jaccard overlap >= 0.5 with
// a gold span of the same label in the same document.
PrecisionAtK precision_at_k(const std::vector<RankedPrediction>& predictions, const Corpus& gold,
                            std::size_t k);

}  // namespace facetgraph

#endif  // FACETGRAPH_EXTRACTION_HPP_
