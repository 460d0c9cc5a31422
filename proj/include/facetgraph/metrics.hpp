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


#ifndef FACETGRAPH_METRICS_HPP_
#define FACETGRAPH_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "facetgraph/inspiration.hpp"

namespace facetgraph {

struct JudgedRanking {
  std::string query_id;
  std::vector<std::string> ranked;       // total order, no duplicates
  std::map<std::string, int> relevance;  // judged pool; 1 = relevant
  std::size_t cutoff = 20;

  std::size_t relevant_count() const;
  bool relevant(const std::string& doc_id) const;
};

// Precision averaged over the ranks of relevant documents within the cutoff,
// divided by the relevant count of the judged pool. nullopt without any
// relevant document.
std::optional<double> average_precision(const JudgedRanking& ranking);

// Binary-gain NDCG at the cutoff with a log2(i + 1) discount. An empty
// ranking scores 0.
std::optional<double> ndcg(const JudgedRanking& ranking);

struct QueryAggregate {
  double mean = 0.0;
  std::size_t scored = 0;
  std::vector<std::string> skipped;  // queries without a relevant document
};

// Mean AP over scoreable queries. With `zero_when_unjudged`, queries without
// relevant documents count as 0 instead of being skipped.
QueryAggregate map_over_queries(const std::vector<JudgedRanking>& rankings,
                                bool zero_when_unjudged = false);
QueryAggregate mean_ndcg(const std::vector<JudgedRanking>& rankings,
                         bool zero_when_unjudged = false);

struct Judgment {
  std::string query_id;
  std::string doc_id;
  int relevant = 0;
  std::string method;
  std::optional<std::size_t> rank;
};

// One {query_id, doc_id, relevant, method, rank?} record per line.
std::vector<Judgment> load_judgments(const std::string& path);

// Relevance per query, merged over methods (relevant if any record says so).
std::map<std::string, std::map<std::string, int>> judgment_pool(
    const std::vector<Judgment>& judgments);

// Rankings keyed by method. Within a (method, query) the records are ordered
// by `rank` when present, else by file order.
std::map<std::string, std::vector<JudgedRanking>> rankings_by_method(
    const std::vector<Judgment>& judgments, std::size_t cutoff = 20);

struct Mark {
  std::size_t box_index = 0;  // display_order of the box
  std::size_t span_index = 0;
};

struct RaterMarks {
  std::string session_id;
  std::string rater_id;
  std::vector<Mark> marked;
  std::string comments_json = "null";  // kept verbatim
};

RaterMarks marks_from_json(const std::string& json);
std::string marks_to_json(const RaterMarks& marks);
// Accepts one record per line, a single object, or an array of records.
std::vector<RaterMarks> load_marks(const std::string& path);

struct MarkMatrix {
  std::string session_id;
  std::vector<std::string> box_condition;      // by display order
  std::vector<std::size_t> spans_per_box;
  std::vector<std::string> raters;
  // marks[rater][box][span] in {0, 1}
  std::vector<std::vector<std::vector<int>>> marks;

  std::size_t mark_count(std::size_t box, std::size_t span) const;
};

// Validates every mark against the session layout.
MarkMatrix build_mark_matrix(const Session& session, const std::vector<RaterMarks>& raters);

struct AgreementCell {
  std::size_t total = 0;
  std::size_t agreed = 0;
  double proportion() const { return total == 0 ? 0.0 : static_cast<double>(agreed) / total; }
};

// Per condition: displayed spans marked by at least `min_raters` raters.
std::map<std::string, AgreementCell> span_agreement(const MarkMatrix& matrix,
                                                    std::size_t min_raters = 2);

// Per condition: boxes holding at least `min_spans` spans that each reached
// `min_raters` marks.
std::map<std::string, AgreementCell> box_agreement(const MarkMatrix& matrix,
                                                   std::size_t min_raters = 2,
                                                   std::size_t min_spans = 2);

}  // namespace facetgraph

#endif  // FACETGRAPH_METRICS_HPP_
