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

#include "facetgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "facetgraph/error.hpp"
#include "json.hpp"

namespace facetgraph {

using nlohmann::json;

std::size_t JudgedRanking::relevant_count() const {
  std::size_t n = 0;
  for (const auto& [doc, rel] : relevance) n += rel > 0 ? 1 : 0;
  return n;
}

bool JudgedRanking::relevant(const std::string& doc_id) const {
  auto it = relevance.find(doc_id);
  return it != relevance.end() && it->second > 0;
}

namespace {

void check_ranking(const JudgedRanking& r) {
  if (r.cutoff == 0) {
    throw Error(ErrorCode::kInvalidArgument, "metrics", "cutoff must be >= 1");
  }
  std::unordered_set<std::string> seen;
  for (const auto& d : r.ranked) {
    if (!seen.insert(d).second) {
      throw Error(ErrorCode::kValidation, "metrics",
                  "query " + r.query_id + " ranks '" + d + "' twice");
    }
  }
}

QueryAggregate aggregate(const std::vector<JudgedRanking>& rankings, bool zero_when_unjudged,
                         std::optional<double> (*metric)(const JudgedRanking&)) {
  QueryAggregate out;
  double sum = 0.0;
  for (const auto& r : rankings) {
    const auto v = metric(r);
    if (!v) {
      out.skipped.push_back(r.query_id);
      if (!zero_when_unjudged) continue;
    }
    sum += v.value_or(0.0);
    ++out.scored;
  }
  if (out.scored == 0) {
    throw Error(ErrorCode::kValidation, "metrics", "no scoreable queries");
  }
  out.mean = sum / static_cast<double>(out.scored);
  return out;
}

}  // namespace

std::optional<double> average_precision(const JudgedRanking& ranking) {
  check_ranking(ranking);
  const std::size_t relevant = ranking.relevant_count();
  if (relevant == 0) return std::nullopt;
  const std::size_t depth = std::min(ranking.cutoff, ranking.ranked.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (!ranking.relevant(ranking.ranked[i])) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(relevant);
}

std::optional<double> ndcg(const JudgedRanking& ranking) {
  check_ranking(ranking);
  const std::size_t relevant = ranking.relevant_count();
  if (relevant == 0) return std::nullopt;
  const std::size_t depth = std::min(ranking.cutoff, ranking.ranked.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (ranking.relevant(ranking.ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(relevant, ranking.cutoff); ++i) {
    ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  return dcg / ideal;
}

QueryAggregate map_over_queries(const std::vector<JudgedRanking>& rankings,
                                bool zero_when_unjudged) {
  return aggregate(rankings, zero_when_unjudged, &average_precision);
}

QueryAggregate mean_ndcg(const std::vector<JudgedRanking>& rankings, bool zero_when_unjudged) {
  return aggregate(rankings, zero_when_unjudged, &ndcg);
}

std::vector<Judgment> load_judgments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "eval", "cannot open judgments file '" + path + "'");
  std::vector<Judgment> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      Judgment r;
      r.query_id = j.at("query_id").get<std::string>();
      r.doc_id = j.at("doc_id").get<std::string>();
      const auto& rel = j.at("relevant");
      r.relevant = rel.is_boolean() ? (rel.get<bool>() ? 1 : 0) : rel.get<int>();
      if (r.relevant != 0 && r.relevant != 1) {
        throw Error(ErrorCode::kParse, "eval",
                    path + ":" + std::to_string(line_no) + ": relevant must be 0 or 1");
      }
      r.method = j.value("method", std::string("default"));
      if (j.contains("rank") && !j.at("rank").is_null()) r.rank = j.at("rank").get<std::size_t>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "eval",
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, int>> judgment_pool(
    const std::vector<Judgment>& judgments) {
  std::map<std::string, std::map<std::string, int>> pool;
  for (const auto& j : judgments) {
    auto& rel = pool[j.query_id][j.doc_id];
    rel = std::max(rel, j.relevant);
  }
  return pool;
}

std::map<std::string, std::vector<JudgedRanking>> rankings_by_method(
    const std::vector<Judgment>& judgments, std::size_t cutoff) {
  const auto pool = judgment_pool(judgments);
  // (method, query) -> (order key, doc)
  std::map<std::string, std::map<std::string, std::vector<std::pair<std::size_t, std::string>>>>
      grouped;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    const auto& j = judgments[i];
    auto& list = grouped[j.method][j.query_id];
    list.emplace_back(j.rank.value_or(list.size() + 1), j.doc_id);
  }
  std::map<std::string, std::vector<JudgedRanking>> out;
  for (auto& [method, queries] : grouped) {
    for (auto& [query, list] : queries) {
      std::stable_sort(list.begin(), list.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      JudgedRanking r;
      r.query_id = query;
      r.cutoff = cutoff;
      r.relevance = pool.at(query);
      std::unordered_set<std::string> seen;
      for (auto& [key, doc] : list) {
        if (seen.insert(doc).second) r.ranked.push_back(doc);
      }
      out[method].push_back(std::move(r));
    }
  }
  return out;
}

RaterMarks marks_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    RaterMarks m;
    m.session_id = j.at("session_id").get<std::string>();
    m.rater_id = j.at("rater_id").get<std::string>();
    for (const auto& e : j.at("marked")) {
      m.marked.push_back({e.at("box_index").get<std::size_t>(), e.at("span_index").get<std::size_t>()});
    }
    if (j.contains("comments")) m.comments_json = j.at("comments").dump();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, "marks", std::string("malformed marks record: ") + e.what());
  }
}

std::string marks_to_json(const RaterMarks& marks) {
  nlohmann::ordered_json j;
  j["session_id"] = marks.session_id;
  j["rater_id"] = marks.rater_id;
  auto marked = nlohmann::ordered_json::array();
  for (const auto& m : marks.marked) {
    marked.push_back({{"box_index", m.box_index}, {"span_index", m.span_index}});
  }
  j["marked"] = std::move(marked);
  j["comments"] = nlohmann::ordered_json::parse(marks.comments_json);
  return j.dump();
}

std::vector<RaterMarks> load_marks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "marks", "cannot open marks file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<RaterMarks> out;
  if (json::accept(text)) {
    const auto j = json::parse(text);
    if (j.is_array()) {
      for (const auto& e : j) out.push_back(marks_from_json(e.dump()));
    } else {
      out.push_back(marks_from_json(text));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(marks_from_json(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "marks", path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::size_t MarkMatrix::mark_count(std::size_t box, std::size_t span) const {
  std::size_t n = 0;
  for (const auto& r : marks) n += r[box][span] ? 1 : 0;
  return n;
}

MarkMatrix build_mark_matrix(const Session& session, const std::vector<RaterMarks>& raters) {
  if (raters.empty()) throw Error(ErrorCode::kValidation, "marks", "no marks supplied");
  MarkMatrix m;
  m.session_id = session.session_id;
  std::vector<const InspirationBox*> by_order(session.boxes.size(), nullptr);
  for (const auto& b : session.boxes) {
    if (b.display_order >= by_order.size() || by_order[b.display_order] != nullptr) {
      throw Error(ErrorCode::kValidation, "marks", "session display order is not a permutation");
    }
    by_order[b.display_order] = &b;
  }
  for (const auto* b : by_order) {
    m.box_condition.push_back(condition_name(b->condition));
    m.spans_per_box.push_back(b->spans.size());
  }
  for (const auto& r : raters) {
    if (r.session_id != session.session_id) {
      throw Error(ErrorCode::kValidation, "marks",
                  "rater " + r.rater_id + " marked session " + r.session_id + ", expected " +
                      session.session_id);
    }
    std::vector<std::vector<int>> grid;
    for (auto n : m.spans_per_box) grid.emplace_back(n, 0);
    for (const auto& mk : r.marked) {
      if (mk.box_index >= grid.size() || mk.span_index >= grid[mk.box_index].size()) {
        throw Error(ErrorCode::kValidation, "marks",
                    "rater " + r.rater_id + " marked box " + std::to_string(mk.box_index) +
                        " span " + std::to_string(mk.span_index) + " outside the session");
      }
      grid[mk.box_index][mk.span_index] = 1;
    }
    m.raters.push_back(r.rater_id);
    m.marks.push_back(std::move(grid));
  }
  return m;
}

std::map<std::string, AgreementCell> span_agreement(const MarkMatrix& matrix,
                                                    std::size_t min_raters) {
  if (matrix.marks.empty()) throw Error(ErrorCode::kValidation, "marks", "empty mark matrix");
  std::map<std::string, AgreementCell> out;
  for (std::size_t b = 0; b < matrix.spans_per_box.size(); ++b) {
    auto& cell = out[matrix.box_condition[b]];
    for (std::size_t s = 0; s < matrix.spans_per_box[b]; ++s) {
      ++cell.total;
      if (matrix.mark_count(b, s) >= min_raters) ++cell.agreed;
    }
  }
  return out;
}

std::map<std::string, AgreementCell> box_agreement(const MarkMatrix& matrix,
                                                   std::size_t min_raters,
                                                   std::size_t min_spans) {
  if (matrix.marks.empty()) throw Error(ErrorCode::kValidation, "marks", "empty mark matrix");
  std::map<std::string, AgreementCell> out;
  for (std::size_t b = 0; b < matrix.spans_per_box.size(); ++b) {
    auto& cell = out[matrix.box_condition[b]];
    ++cell.total;
    std::size_t qualifying = 0;
    for (std::size_t s = 0; s < matrix.spans_per_box[b]; ++s) {
      if (matrix.mark_count(b, s) >= min_raters) ++qualifying;
    }
    if (qualifying >= min_spans) ++cell.agreed;
  }
  return out;
}

}  // namespace facetgraph
