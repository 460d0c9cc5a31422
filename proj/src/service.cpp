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

#include "facetgraph/service.hpp"

#include <fstream>
#include <sstream>

#include "facetgraph/inspiration.hpp"
#include "facetgraph/metrics.hpp"

namespace facetgraph {
namespace {

Json stamped(const Bundle& bundle, Json body) {
  body["build_id"] = bundle.build_id;
  return body;
}

const ConceptSet* concept_set_of(const Bundle& bundle, const std::string& concept_id) {
  for (const ConceptSet* set : {&bundle.purpose, &bundle.mechanism}) {
    for (const auto& c : set->concepts) {
      if (c.id == concept_id) return set;
    }
  }
  return nullptr;
}

const Concept* find_concept(const Bundle& bundle, const std::string& concept_id) {
  const auto* set = concept_set_of(bundle, concept_id);
  if (set == nullptr) return nullptr;
  for (const auto& c : set->concepts) {
    if (c.id == concept_id) return &c;
  }
  return nullptr;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::size_t parse_count(const std::string& text, const char* name) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw Error(ErrorCode::kInvalidArgument, "request",
                std::string("'") + name + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

template <typename T>
T field(const Json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  try {
    return body.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "inspire",
                std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kOverConstrained:
      return 409;
    case ErrorCode::kIo:
    case ErrorCode::kIntegrity:
    case ErrorCode::kInternal:
      return 500;
  }
  return 500;
}

Json error_json(const Error& e) {
  Json j;
  j["code"] = error_code_name(e.code());
  j["stage"] = e.stage();
  j["message"] = e.what();
  return j;
}

Json health_json(const Bundle& bundle) {
  Json j;
  j["status"] = "ok";
  j["documents"] = bundle.corpus.size();
  j["purpose_concepts"] = bundle.purpose.concepts.size();
  j["mechanism_concepts"] = bundle.mechanism.concepts.size();
  j["edges"] = bundle.graph.edges().size();
  return stamped(bundle, std::move(j));
}

Json search_json(const Bundle& bundle, const Json& query) {
  const FacetQuery q = query_from_json(query);
  const auto response = search(q, bundle.index, bundle.table, bundle.embed_options);
  Json j = search_response_to_json(response);
  j["query"] = query_to_json(q);
  return stamped(bundle, std::move(j));
}

Json product_json(const Bundle& bundle, const std::string& doc_id) {
  const auto* doc = bundle.corpus.find(doc_id);
  if (doc == nullptr) throw Error(ErrorCode::kNotFound, "products", "no product '" + doc_id + "'");
  Json j = document_to_json(*doc);
  return stamped(bundle, std::move(j));
}

Json concepts_json(const Bundle& bundle, const std::optional<std::string>& kind) {
  std::vector<const ConceptSet*> sets = {&bundle.purpose, &bundle.mechanism};
  if (kind) {
    const auto label = parse_label(*kind);
    sets = {label == SpanLabel::kPurpose ? &bundle.purpose : &bundle.mechanism};
  }
  Json list = Json::array();
  for (const auto* set : sets) {
    for (const auto& c : set->concepts) {
      Json cj = concept_to_json(c, false);
      cj["size"] = c.members.size();
      list.push_back(std::move(cj));
    }
  }
  Json j;
  j["concepts"] = std::move(list);
  return stamped(bundle, std::move(j));
}

Json concept_json(const Bundle& bundle, const std::string& concept_id) {
  const auto* c = find_concept(bundle, concept_id);
  if (c == nullptr) throw Error(ErrorCode::kNotFound, "concepts", "no concept '" + concept_id + "'");
  Json j = concept_to_json(*c, false);
  j["size"] = c->members.size();
  Json members = Json::array();
  for (std::size_t i = 0; i < c->members.size(); ++i) {
    const auto& ref = c->members[i];
    members.push_back({{"span_id", c->member_span_ids[i]},
                       {"doc_id", bundle.corpus.at(ref.doc).id},
                       {"surface", bundle.corpus.span(ref).surface}});
  }
  j["members"] = std::move(members);
  return stamped(bundle, std::move(j));
}

Json neighbors_json(const Bundle& bundle, const std::string& concept_id,
                    const std::string& direction, std::size_t top) {
  const auto list = bundle.graph.neighbors(concept_id, parse_direction(direction), top);
  Json out = Json::array();
  for (const auto& n : list) out.push_back(neighbor_to_json(n, bundle.graph));
  Json j;
  j["concept_id"] = concept_id;
  j["direction"] = direction;
  j["neighbors"] = std::move(out);
  return stamped(bundle, std::move(j));
}

Json edge_json(const Bundle& bundle, const std::string& from, const std::string& to) {
  const auto* e = bundle.graph.edge(from, to);
  if (e == nullptr) {
    throw Error(ErrorCode::kNotFound, "graph", "no edge " + from + " -> " + to);
  }
  Json j = edge_to_json(*e);
  j.erase("type");
  return stamped(bundle, std::move(j));
}

Json inspire_json(const Bundle& bundle, const Json& request) {
  if (!request.is_object() || !request.contains("seed") || !request.at("seed").is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "inspire", "request needs a 'seed' string");
  }
  SessionConfig config;
  if (request.contains("conditions")) {
    config.conditions.clear();
    for (const auto& c : request.at("conditions")) {
      config.conditions.push_back(parse_condition(c.get<std::string>()));
    }
    if (config.conditions.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "inspire", "no conditions requested");
    }
  }
  config.variants = field<std::size_t>(request, "variants", config.variants);
  if (request.contains("boxes")) {
    const auto boxes = field<std::size_t>(request, "boxes", 0);
    if (boxes == 0 || boxes % config.conditions.size() != 0) {
      throw Error(ErrorCode::kInvalidArgument, "inspire",
                  "boxes must be a positive multiple of the " +
                      std::to_string(config.conditions.size()) + " conditions");
    }
    config.variants = boxes / config.conditions.size();
  }
  if (config.variants == 0) throw Error(ErrorCode::kInvalidArgument, "inspire", "variants must be >= 1");
  config.k = field<std::size_t>(request, "k", config.k);
  if (config.k == 0) throw Error(ErrorCode::kInvalidArgument, "inspire", "k must be >= 1");
  config.top_r = field<std::size_t>(request, "top_r", config.top_r);
  config.rng_seed = field<std::uint64_t>(request, "rng_seed", config.rng_seed);
  config.session_id = field<std::string>(request, "session_id", "");
  const auto weight = field<std::string>(request, "textrank_weight", "cosine");
  if (weight == "cosine") {
    config.textrank_weight = TextRankWeight::kCosine;
  } else if (weight == "lexical") {
    config.textrank_weight = TextRankWeight::kLexical;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "inspire", "textrank_weight must be cosine or lexical");
  }
  if (request.contains("abstractions")) {
    const auto& a = request.at("abstractions");
    if (a.is_string()) {
      config.abstractions = load_abstractions(a.get<std::string>());
    } else {
      config.abstractions =
          field<std::map<std::string, std::vector<std::string>>>(request, "abstractions", {});
    }
  }
  InspirationSources sources;
  sources.corpus = &bundle.corpus;
  sources.embeddings = &bundle.embeddings;
  sources.purpose_concepts = &bundle.purpose;
  sources.graph = &bundle.graph;
  sources.table = &bundle.table;
  sources.embed_options = bundle.embed_options;
  const auto session = generate_session(request.at("seed").get<std::string>(), sources, config);
  Json j = Json::parse(session_to_json(session));
  return stamped(bundle, std::move(j));
}

Service::Service(const std::string& bundle_dir, ServiceOptions options)
    : bundle_(load_bundle(bundle_dir)), bundle_dir_(bundle_dir), options_(std::move(options)) {}

std::shared_ptr<const Bundle> Service::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return bundle_;
}

std::string Service::reload(const std::string& dir) {
  std::string target;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    target = dir.empty() ? bundle_dir_ : dir;
  }
  auto fresh = load_bundle(target);
  std::lock_guard<std::mutex> lock(mutex_);
  bundle_ = std::move(fresh);
  bundle_dir_ = target;
  return bundle_->build_id;
}

Json Service::append_marks(const Bundle& bundle, const std::string& body) const {
  if (options_.marks_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "marks", "marks persistence is not configured");
  }
  const auto marks = marks_from_json(body);
  const auto line = marks_to_json(marks);
  {
    std::lock_guard<std::mutex> lock(append_mutex_);
    std::ofstream out(options_.marks_path, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "marks", "cannot append to '" + options_.marks_path + "'");
    out << line << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "marks", "short write to '" + options_.marks_path + "'");
  }
  Json j;
  j["accepted"] = marks.marked.size();
  j["session_id"] = marks.session_id;
  j["rater_id"] = marks.rater_id;
  return stamped(bundle, std::move(j));
}

ServiceResponse Service::handle(const std::string& method, const std::string& path,
                                const std::map<std::string, std::string>& params,
                                const std::string& body) {
  try {
    return dispatch(method, path, params, body);
  } catch (const Error& e) {
    return {http_status(e.code()), error_json(e)};
  } catch (const nlohmann::json::exception& e) {
    return {400, error_json(Error(ErrorCode::kParse, "request", e.what()))};
  } catch (const std::exception& e) {
    return {500, error_json(Error(ErrorCode::kInternal, "request", e.what()))};
  }
}

ServiceResponse Service::dispatch(const std::string& method, const std::string& path,
                                  const std::map<std::string, std::string>& params,
                                  const std::string& body) {
  const auto parts = split_path(path);
  const auto bundle = snapshot();
  auto param = [&](const char* key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  auto expect = [&](const char* verb) {
    if (method != verb) {
      throw Error(ErrorCode::kInvalidArgument, "route",
                  method + " is not allowed on " + path + " (use " + verb + ")");
    }
  };
  auto body_json = [&]() {
    return body.empty() ? Json::object() : parse_json(body, "request");
  };
  if (parts.size() >= 2 && parts[0] == "api") {
    const auto& head = parts[1];
    if (head == "health" && parts.size() == 2) {
      expect("GET");
      return {200, health_json(*bundle)};
    }
    if (head == "search" && parts.size() == 2) {
      expect("POST");
      return {200, search_json(*bundle, body_json())};
    }
    if (head == "products" && parts.size() == 3) {
      expect("GET");
      return {200, product_json(*bundle, parts[2])};
    }
    if (head == "concepts" && parts.size() == 2) {
      expect("GET");
      return {200, concepts_json(*bundle, param("kind"))};
    }
    if (head == "concepts" && parts.size() == 3) {
      expect("GET");
      return {200, concept_json(*bundle, parts[2])};
    }
    if (head == "graph" && parts.size() == 4 && parts[2] == "neighbors") {
      expect("GET");
      const auto top = param("top");
      return {200, neighbors_json(*bundle, parts[3], param("direction").value_or("out"),
                                  top ? parse_count(*top, "top") : 3)};
    }
    if (head == "graph" && parts.size() == 5 && parts[2] == "edge") {
      expect("GET");
      return {200, edge_json(*bundle, parts[3], parts[4])};
    }
    if (head == "inspire" && parts.size() == 2) {
      expect("POST");
      Json session = inspire_json(*bundle, body_json());
      if (!options_.sessions_path.empty()) {
        Json record = session;
        record.erase("build_id");
        std::lock_guard<std::mutex> lock(append_mutex_);
        std::ofstream out(options_.sessions_path, std::ios::app | std::ios::binary);
        if (!out) {
          throw Error(ErrorCode::kIo, "inspire",
                      "cannot append to '" + options_.sessions_path + "'");
        }
        out << record.dump() << '\n';
      }
      return {200, std::move(session)};
    }
    if (head == "marks" && parts.size() == 2) {
      expect("POST");
      return {200, append_marks(*bundle, body)};
    }
    if (head == "reload" && parts.size() == 2) {
      expect("POST");
      const Json req = body_json();
      reload(req.value("bundle", std::string()));
      Json j;
      j["reloaded"] = true;
      return {200, stamped(*snapshot(), std::move(j))};
    }
  }
  throw Error(ErrorCode::kNotFound, "route", "no route for " + method + " " + path);
}

}  // namespace facetgraph
