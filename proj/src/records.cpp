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

#include "facetgraph/records.hpp"

#include "facetgraph/error.hpp"

namespace facetgraph {
namespace {

std::vector<std::string> chunk_list(const Json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return {};
  const auto& v = body.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "search",
                std::string("'") + key + "' must be a string or a list of strings");
  }
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw Error(ErrorCode::kInvalidArgument, "search",
                  std::string("'") + key + "' must hold strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json parse_json(const std::string& text, const std::string& stage) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, stage, std::string("invalid JSON: ") + e.what());
  }
}

Json stats_to_json(const CorpusStats& s) {
  Json j;
  j["documents"] = s.documents;
  j["purpose_spans"] = s.purpose_spans;
  j["mechanism_spans"] = s.mechanism_spans;
  j["tokens"] = s.tokens;
  j["purpose_tokens"] = s.purpose_tokens;
  j["mechanism_tokens"] = s.mechanism_tokens;
  j["purpose_share"] = s.purpose_share();
  j["mechanism_share"] = s.mechanism_share();
  j["other_share"] = s.other_share();
  return j;
}

Json document_to_json(const Document& doc) {
  Json j = Json::parse(serialize_document(doc));
  auto& spans = j["spans"];
  for (std::size_t i = 0; i < doc.spans.size(); ++i) {
    spans[i]["span_id"] = span_id(doc.id, i);
    spans[i]["surface"] = doc.spans[i].surface;
  }
  return j;
}

FacetQuery query_from_json(const Json& body) {
  if (!body.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "search", "query must be an object");
  }
  try {
    FacetQuery q;
    q.purpose_pos = chunk_list(body, "purpose");
    q.purpose_neg = chunk_list(body, "not_purpose");
    q.mech_pos = chunk_list(body, "mechanism");
    q.mech_neg = chunk_list(body, "not_mechanism");
    if (body.contains("method")) q.method = parse_method(body.at("method").get<std::string>());
    if (body.contains("neg_percentile")) q.neg_percentile = body.at("neg_percentile").get<double>();
    if (body.contains("limit")) {
      const auto limit = body.at("limit").get<long long>();
      if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "search", "limit must be >= 1");
      q.limit = static_cast<std::size_t>(limit);
    }
    if (body.contains("combine")) q.combine = parse_combine(body.at("combine").get<std::string>());
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "search", std::string("bad query field: ") + e.what());
  }
}

Json query_to_json(const FacetQuery& q) {
  Json j;
  j["purpose"] = q.purpose_pos;
  j["not_purpose"] = q.purpose_neg;
  j["mechanism"] = q.mech_pos;
  j["not_mechanism"] = q.mech_neg;
  j["method"] = method_name(q.method);
  j["neg_percentile"] = q.neg_percentile;
  j["limit"] = q.limit;
  j["combine"] = combine_name(q.combine);
  return j;
}

Json search_response_to_json(const SearchResponse& response) {
  Json results = Json::array();
  std::size_t rank = 0;
  for (const auto& r : response.results) {
    Json j;
    j["rank"] = ++rank;
    j["doc_id"] = r.doc_id;
    j["score"] = r.score;
    j["purpose_distance"] = optional_number(r.purpose_distance);
    j["mechanism_distance"] = optional_number(r.mechanism_distance);
    Json matches = Json::array();
    for (const auto& m : r.matched_spans) {
      Json mj;
      mj["chunk"] = m.chunk;
      mj["side"] = label_name(m.side);
      mj["span_id"] = m.span_id ? Json(*m.span_id) : Json(nullptr);
      mj["similarity"] = m.similarity;
      matches.push_back(std::move(mj));
    }
    j["matched_spans"] = std::move(matches);
    results.push_back(std::move(j));
  }
  Json out;
  out["results"] = std::move(results);
  out["candidates"] = response.candidates;
  out["over_constrained"] = response.over_constrained;
  return out;
}

Json concept_to_json(const Concept& c, bool with_centroid) {
  Json j;
  j["id"] = c.id;
  j["kind"] = label_name(c.kind);
  j["member_span_ids"] = c.member_span_ids;
  if (with_centroid) j["centroid"] = c.centroid;
  j["title_spans"] = c.title_spans;
  return j;
}

Concept concept_from_json(const Json& record, const Corpus& corpus) {
  Concept c;
  c.id = record.at("id").get<std::string>();
  c.kind = parse_label(record.at("kind").get<std::string>());
  c.member_span_ids = record.at("member_span_ids").get<std::vector<std::string>>();
  c.centroid = record.at("centroid").get<Vec>();
  c.title_spans = record.at("title_spans").get<std::vector<std::string>>();
  for (const auto& id : c.member_span_ids) {
    auto ref = corpus.resolve(id);
    if (!ref) {
      throw Error(ErrorCode::kIntegrity, "load_bundle",
                  "concept " + c.id + " references unknown span " + id);
    }
    c.members.push_back(*ref);
  }
  return c;
}

Json trace_to_json(const std::vector<KTracePoint>& trace) {
  Json out = Json::array();
  for (const auto& p : trace) out.push_back({{"k", p.k}, {"silhouette", p.silhouette}});
  return out;
}

Json rule_to_json(const Rule& r) {
  Json j;
  j["antecedent"] = r.antecedent;
  j["consequent"] = r.consequent;
  j["support_count"] = r.support_count;
  j["antecedent_count"] = r.antecedent_count;
  j["consequent_count"] = r.consequent_count;
  j["confidence"] = r.confidence;
  return j;
}

Rule rule_from_json(const Json& j) {
  Rule r;
  r.antecedent = j.at("antecedent").get<std::string>();
  r.consequent = j.at("consequent").get<std::string>();
  r.support_count = j.at("support_count").get<std::size_t>();
  r.antecedent_count = j.at("antecedent_count").get<std::size_t>();
  r.consequent_count = j.at("consequent_count").get<std::size_t>();
  r.confidence = j.at("confidence").get<double>();
  return r;
}

Json node_to_json(const GraphNode& n) {
  Json j;
  j["type"] = "node";
  j["id"] = n.id;
  j["kind"] = label_name(n.kind);
  j["title_spans"] = n.title_spans;
  j["size"] = n.size;
  return j;
}

GraphNode node_from_json(const Json& j) {
  GraphNode n;
  n.id = j.at("id").get<std::string>();
  n.kind = parse_label(j.at("kind").get<std::string>());
  n.title_spans = j.at("title_spans").get<std::vector<std::string>>();
  n.size = j.at("size").get<std::size_t>();
  return n;
}

Json edge_to_json(const GraphEdge& e) {
  Json j;
  j["type"] = "edge";
  j["from"] = e.from;
  j["to"] = e.to;
  j["weight"] = e.weight;
  j["support_count"] = e.support_count;
  j["relation"] = relation_name(e.relation);
  Json prov = Json::array();
  for (const auto& p : e.provenance) {
    prov.push_back({{"doc_id", p.doc_id}, {"from_span_id", p.from_span_id},
                    {"to_span_id", p.to_span_id}});
  }
  j["provenance"] = std::move(prov);
  return j;
}

GraphEdge edge_from_json(const Json& j) {
  GraphEdge e;
  e.from = j.at("from").get<std::string>();
  e.to = j.at("to").get<std::string>();
  e.weight = j.at("weight").get<double>();
  e.support_count = j.at("support_count").get<std::size_t>();
  e.relation = parse_relation(j.at("relation").get<std::string>());
  for (const auto& p : j.at("provenance")) {
    e.provenance.push_back({p.at("doc_id").get<std::string>(),
                            p.at("from_span_id").get<std::string>(),
                            p.at("to_span_id").get<std::string>()});
  }
  return e;
}

Json neighbor_to_json(const Neighbor& n, const ConceptGraph& graph) {
  Json j;
  j["concept_id"] = n.concept_id;
  const auto* node = graph.node(n.concept_id);
  j["kind"] = node ? Json(label_name(node->kind)) : Json(nullptr);
  j["title_spans"] = node ? Json(node->title_spans) : Json::array();
  j["confidence"] = n.confidence;
  j["support_count"] = n.support_count;
  j["relation"] = relation_name(n.relation);
  j["direction"] = n.outgoing ? "out" : "in";
  return j;
}

Json class_score_to_json(const ClassScore& s) {
  Json j;
  j["tp"] = s.true_positive;
  j["fp"] = s.false_positive;
  j["fn"] = s.false_negative;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

Json extraction_report_to_json(const ExtractionReport& r) {
  Json j;
  j["purpose"] = class_score_to_json(r.purpose);
  j["mechanism"] = class_score_to_json(r.mechanism);
  j["micro"] = class_score_to_json(r.micro);
  j["span_exact"] = class_score_to_json(r.span_exact);
  j["tokens"] = r.tokens;
  j["documents"] = r.documents;
  return j;
}

}  // namespace facetgraph
