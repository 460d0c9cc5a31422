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


#ifndef FACETGRAPH_RECORDS_HPP_
#define FACETGRAPH_RECORDS_HPP_

#include <string>
#include <vector>

#include "facetgraph/clustering.hpp"
#include "facetgraph/corpus.hpp"
#include "facetgraph/extraction.hpp"
#include "facetgraph/rules.hpp"
#include "facetgraph/search.hpp"
#include "json.hpp"

namespace facetgraph {

using Json = nlohmann::ordered_json;

Json stats_to_json(const CorpusStats& stats);
Json document_to_json(const Document& doc);

// Accepts {purpose, not_purpose, mechanism, not_mechanism, method,
// neg_percentile, limit, combine}; each chunk list may also be a string.
FacetQuery query_from_json(const Json& body);
Json query_to_json(const FacetQuery& query);
Json search_response_to_json(const SearchResponse& response);

Json concept_to_json(const Concept& concept_, bool with_centroid = true);
// Member refs are resolved against the corpus.
Concept concept_from_json(const Json& record, const Corpus& corpus);
Json trace_to_json(const std::vector<KTracePoint>& trace);

Json rule_to_json(const Rule& rule);
Rule rule_from_json(const Json& record);

Json node_to_json(const GraphNode& node);
GraphNode node_from_json(const Json& record);
Json edge_to_json(const GraphEdge& edge);
GraphEdge edge_from_json(const Json& record);
Json neighbor_to_json(const Neighbor& neighbor, const ConceptGraph& graph);

Json class_score_to_json(const ClassScore& score);
Json extraction_report_to_json(const ExtractionReport& report);

// Parses JSON text, mapping syntax errors to kParse tagged with `stage`.
Json parse_json(const std::string& text, const std::string& stage);

}  // namespace facetgraph

#endif  // FACETGRAPH_RECORDS_HPP_
