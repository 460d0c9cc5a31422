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


#ifndef FACETGRAPH_EVALUATION_HPP_
#define FACETGRAPH_EVALUATION_HPP_

#include <string>
#include <vector>

#include "facetgraph/inspiration.hpp"
#include "facetgraph/records.hpp"

namespace facetgraph {

// {judgments, cutoff?, zero_when_unjudged?, queries?, bundle?}. Without
// queries the rankings come from the judgment records themselves; with
// queries and a bundle, live rankings are computed for avg, maxmin and the
// whole-document average and scored against the judged pool.
Json eval_search(const Json& request);

// {pred, gold, k?: [..]}: token-level report plus precision at each k.
Json eval_extraction(const Json& request);

// {sessions, marks: [paths], min_raters?, min_spans?}: span and box
// agreement per condition, summed over sessions.
Json eval_inspiration(const Json& request);

// {input, output?, extract?: "none" | "heuristic"}: validates a corpus,
// optionally replaces its spans with heuristic predictions, writes it back in
// canonical form and reports statistics.
Json ingest_json(const Json& request);

// Session records, one per line or a single object.
std::vector<Session> load_sessions(const std::string& path);

}  // namespace facetgraph

#endif  // FACETGRAPH_EVALUATION_HPP_
