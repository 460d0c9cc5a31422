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

#include "facetgraph/evaluation.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "facetgraph/bundle.hpp"
#include "facetgraph/error.hpp"
#include "facetgraph/extraction.hpp"
#include "facetgraph/metrics.hpp"
#include "facetgraph/search.hpp"

namespace facetgraph {
namespace {

std::string required_path(const Json& request, const char* key, const char* stage) {
  if (!request.contains(key) || !request.at(key).is_string()) {
    throw Error(ErrorCode::kInvalidArgument, stage, std::string("missing '") + key + "' path");
  }
  return request.at(key).get<std::string>();
}

std::string slurp(const std::string& path, const char* stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, stage, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json score_method(const std::string& method, const std::vector<JudgedRanking>& rankings,
                  bool zero_when_unjudged, Json& per_query) {
  for (const auto& r : rankings) {
    per_query.push_back({{"method", method},
                         {"query_id", r.query_id},
                         {"ap", optional_number(average_precision(r))},
                         {"ndcg", optional_number(ndcg(r))},
                         {"retrieved", r.ranked.size()},
                         {"relevant", r.relevant_count()}});
  }
  const auto map = map_over_queries(rankings, zero_when_unjudged);
  const auto nd = mean_ndcg(rankings, zero_when_unjudged);
  Json j;
  j["method"] = method;
  j["map"] = map.mean;
  j["ndcg"] = nd.mean;
  j["queries_scored"] = map.scored;
  j["skipped"] = map.skipped;
  return j;
}

}  // namespace

Json eval_search(const Json& request) {
  const auto judgments = load_judgments(required_path(request, "judgments", "eval"));
  if (judgments.empty()) throw Error(ErrorCode::kValidation, "eval", "judgments file is empty");
  const std::size_t cutoff = request.value("cutoff", std::size_t{20});
  if (cutoff == 0) throw Error(ErrorCode::kInvalidArgument, "eval", "cutoff must be >= 1");
  const bool zero = request.value("zero_when_unjudged", false);

  std::map<std::string, std::vector<JudgedRanking>> by_method;
  Json warnings = Json::array();
  if (request.contains("queries")) {
    const auto bundle = load_bundle(required_path(request, "bundle", "eval"));
    const auto pool = judgment_pool(judgments);
    std::istringstream lines(slurp(required_path(request, "queries", "eval"), "eval"));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const Json record = parse_json(line, "eval");
      const auto query_id = record.at("query_id").get<std::string>();
      FacetQuery q = query_from_json(record);
      q.limit = cutoff;
      auto it = pool.find(query_id);
      if (it == pool.end()) warnings.push_back("query " + query_id + " has no judgments");
      auto ranking = [&](const std::vector<SearchResult>& results) {
        JudgedRanking r;
        r.query_id = query_id;
        r.cutoff = cutoff;
        if (it != pool.end()) r.relevance = it->second;
        for (const auto& res : results) r.ranked.push_back(res.doc_id);
        return r;
      };
      for (auto method : {SearchMethod::kAvg, SearchMethod::kMaxMin}) {
        q.method = method;
        const auto resp = search(q, bundle->index, bundle->table, bundle->embed_options);
        by_method[method_name(method)].push_back(ranking(resp.results));
      }
      by_method["doc_average"].push_back(ranking(
          search_document_average(q, bundle->corpus, bundle->table, bundle->embed_options)));
    }
  } else {
    by_method = rankings_by_method(judgments, cutoff);
  }

  Json methods = Json::array();
  Json per_query = Json::array();
  for (const auto& [method, rankings] : by_method) {
    methods.push_back(score_method(method, rankings, zero, per_query));
    for (const auto& q : methods.back().at("skipped")) {
      warnings.push_back("method " + method + ": query " + q.get<std::string>() +
                         " has no relevant documents and was skipped");
    }
  }
  Json out;
  out["cutoff"] = cutoff;
  out["methods"] = std::move(methods);
  out["per_query"] = std::move(per_query);
  out["warnings"] = std::move(warnings);
  return out;
}

Json eval_extraction(const Json& request) {
  const Corpus predicted = load_corpus(required_path(request, "pred", "eval"));
  const Corpus gold = load_corpus(required_path(request, "gold", "eval"));
  Json out;
  out["report"] = extraction_report_to_json(score_extraction(predicted, gold));
  std::vector<std::size_t> ks = {1, 5, 10, 20};
  if (request.contains("k")) {
    const auto& k = request.at("k");
    ks = k.is_array() ? k.get<std::vector<std::size_t>>()
                      : std::vector<std::size_t>{k.get<std::size_t>()};
  }
  const auto predictions = collect_predictions(predicted);
  Json pk = Json::array();
  for (auto k : ks) {
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, "eval", "k must be >= 1");
    const auto p = precision_at_k(predictions, gold, k);
    pk.push_back({{"k", k}, {"precision", p.value}, {"effective_k", p.effective_k}});
  }
  out["precision_at_k"] = std::move(pk);
  return out;
}

std::vector<Session> load_sessions(const std::string& path) {
  const auto text = slurp(path, "eval");
  std::vector<Session> out;
  if (nlohmann::json::accept(text)) {
    const auto j = nlohmann::json::parse(text);
    if (j.is_array()) {
      for (const auto& s : j) out.push_back(session_from_json(s.dump()));
    } else {
      out.push_back(session_from_json(text));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(session_from_json(line));
  }
  return out;
}

Json eval_inspiration(const Json& request) {
  const auto sessions = load_sessions(required_path(request, "sessions", "eval"));
  std::vector<std::string> mark_paths;
  if (request.contains("marks")) {
    const auto& m = request.at("marks");
    mark_paths = m.is_array() ? m.get<std::vector<std::string>>()
                              : std::vector<std::string>{m.get<std::string>()};
  }
  if (mark_paths.empty()) throw Error(ErrorCode::kInvalidArgument, "eval", "no marks files given");
  const std::size_t min_raters = request.value("min_raters", std::size_t{2});
  const std::size_t min_spans = request.value("min_spans", std::size_t{2});

  std::map<std::string, std::vector<RaterMarks>> by_session;
  for (const auto& p : mark_paths) {
    for (auto& m : load_marks(p)) by_session[m.session_id].push_back(std::move(m));
  }
  std::map<std::string, const Session*> session_of;
  for (const auto& s : sessions) session_of[s.session_id] = &s;

  std::map<std::string, AgreementCell> spans, boxes;
  std::size_t raters = 0;
  Json warnings = Json::array();
  for (const auto& [sid, marks] : by_session) {
    auto it = session_of.find(sid);
    if (it == session_of.end()) {
      throw Error(ErrorCode::kValidation, "eval", "marks reference unknown session '" + sid + "'");
    }
    const auto matrix = build_mark_matrix(*it->second, marks);
    raters += matrix.raters.size();
    for (const auto& [cond, cell] : span_agreement(matrix, min_raters)) {
      spans[cond].total += cell.total;
      spans[cond].agreed += cell.agreed;
    }
    for (const auto& [cond, cell] : box_agreement(matrix, min_raters, min_spans)) {
      boxes[cond].total += cell.total;
      boxes[cond].agreed += cell.agreed;
    }
  }
  for (const auto& s : sessions) {
    if (!by_session.count(s.session_id)) warnings.push_back("session " + s.session_id + " has no marks");
  }
  Json conditions = Json::array();
  for (const auto& [cond, cell] : spans) {
    const auto& b = boxes[cond];
    conditions.push_back({{"condition", cond},
                          {"spans_total", cell.total},
                          {"spans_agreed", cell.agreed},
                          {"span_agreement", cell.proportion()},
                          {"boxes_total", b.total},
                          {"boxes_agreed", b.agreed},
                          {"box_agreement", b.proportion()}});
  }
  Json out;
  out["min_raters"] = min_raters;
  out["min_spans"] = min_spans;
  out["sessions"] = by_session.size();
  out["raters"] = raters;
  out["conditions"] = std::move(conditions);
  out["warnings"] = std::move(warnings);
  return out;
}

Json ingest_json(const Json& request) {
  Corpus corpus = load_corpus(required_path(request, "input", "ingest"));
  const auto mode = request.value("extract", std::string("none"));
  if (mode == "heuristic") {
    corpus = heuristic_extract_corpus(corpus);
  } else if (mode != "none") {
    throw Error(ErrorCode::kInvalidArgument, "ingest", "extract must be none or heuristic");
  }
  if (request.contains("output") && request.at("output").is_string()) {
    save_corpus(corpus, request.at("output").get<std::string>());
  }
  Json out;
  out["stats"] = stats_to_json(corpus.stats());
  out["extract"] = mode;
  return out;
}

}  // namespace facetgraph
