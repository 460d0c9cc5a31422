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

#include "facetgraph/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "facetgraph/error.hpp"

namespace facetgraph {
namespace {

// a.support / a.n(A) > b.support / b.n(A), compared exactly.
bool higher_confidence(std::size_t sa, std::size_t na, std::size_t sb, std::size_t nb) {
  return static_cast<unsigned long long>(sa) * nb > static_cast<unsigned long long>(sb) * na;
}

bool rule_before(const Rule& a, const Rule& b) {
  if (higher_confidence(a.support_count, a.antecedent_count, b.support_count, b.antecedent_count)) {
    return true;
  }
  if (higher_confidence(b.support_count, b.antecedent_count, a.support_count, a.antecedent_count)) {
    return false;
  }
  if (a.support_count != b.support_count) return a.support_count > b.support_count;
  return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

void ConceptAssignment::add(const ConceptSet& set) {
  for (const auto& c : set.concepts) {
    kind_of_concept[c.id] = c.kind;
    for (const auto& id : c.member_span_ids) concept_of_span[id] = c.id;
  }
  unclustered.insert(set.unclustered_span_ids.begin(), set.unclustered_span_ids.end());
}

bool Transaction::contains(const std::string& concept_id) const {
  return std::binary_search(concept_ids.begin(), concept_ids.end(), concept_id);
}

const std::string* Transaction::evidence(const std::string& concept_id) const {
  auto it = std::lower_bound(concept_ids.begin(), concept_ids.end(), concept_id);
  if (it == concept_ids.end() || *it != concept_id) return nullptr;
  return &evidence_span_ids[static_cast<std::size_t>(it - concept_ids.begin())];
}

std::vector<Transaction> build_transactions(const Corpus& corpus,
                                            const ConceptAssignment& assignment) {
  std::vector<Transaction> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    std::map<std::string, std::string> first_span;
    for (std::size_t s = 0; s < doc.spans.size(); ++s) {
      const auto id = span_id(doc.id, s);
      auto it = assignment.concept_of_span.find(id);
      if (it == assignment.concept_of_span.end()) {
        if (assignment.unclustered.count(id) > 0) continue;
        throw Error(ErrorCode::kValidation, "build_transactions",
                    "span " + id + " is not assigned to any concept");
      }
      first_span.emplace(it->second, id);
    }
    Transaction t;
    t.doc_id = doc.id;
    for (auto& [concept_id, span] : first_span) {
      t.concept_ids.push_back(concept_id);
      t.evidence_span_ids.push_back(span);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Rule> mine_rules(const std::vector<Transaction>& transactions,
                             const RuleMiningConfig& config) {
  if (transactions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mine_rules", "no transactions");
  }
  if (config.min_support_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mine_rules", "min_support_count must be >= 1");
  }
  if (!(config.min_confidence > 0.0 && config.min_confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mine_rules", "min_confidence must lie in (0, 1]");
  }

  // Pass 1: frequent single items.
  std::map<std::string, std::size_t> item_count;
  for (const auto& t : transactions) {
    for (const auto& c : t.concept_ids) ++item_count[c];
  }
  auto frequent = [&](const std::string& c) {
    return item_count[c] >= config.min_support_count;
  };

  // Pass 2: pairs whose items are both frequent (Apriori pruning).
  std::map<std::pair<std::string, std::string>, std::size_t> pair_count;
  for (const auto& t : transactions) {
    std::vector<const std::string*> items;
    for (const auto& c : t.concept_ids) {
      if (frequent(c)) items.push_back(&c);
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) ++pair_count[{*items[i], *items[j]}];
    }
  }

  std::vector<Rule> rules;
  for (const auto& [pair, support] : pair_count) {
    if (support < config.min_support_count) continue;
    for (int dir = 0; dir < 2; ++dir) {
      Rule r;
      r.antecedent = dir == 0 ? pair.first : pair.second;
      r.consequent = dir == 0 ? pair.second : pair.first;
      r.support_count = support;
      r.antecedent_count = item_count[r.antecedent];
      r.consequent_count = item_count[r.consequent];
      r.confidence = static_cast<double>(support) / static_cast<double>(r.antecedent_count);
      if (r.confidence + 1e-12 < config.min_confidence) continue;
      rules.push_back(std::move(r));
    }
  }
  std::sort(rules.begin(), rules.end(), rule_before);
  return rules;
}

const char* relation_name(RelationType type) {
  switch (type) {
    case RelationType::kSub: return "sub";
    case RelationType::kSimilar: return "similar";
    case RelationType::kFunctionality: return "functionality";
    case RelationType::kCooccur: return "cooccur";
  }
  return "cooccur";
}

RelationType parse_relation(std::string_view name) {
  if (name == "sub") return RelationType::kSub;
  if (name == "similar") return RelationType::kSimilar;
  if (name == "functionality") return RelationType::kFunctionality;
  if (name == "cooccur") return RelationType::kCooccur;
  throw Error(ErrorCode::kParse, "graph", "unknown relation type '" + std::string(name) + "'");
}

Direction parse_direction(std::string_view name) {
  if (name == "in") return Direction::kIn;
  if (name == "out") return Direction::kOut;
  if (name == "both") return Direction::kBoth;
  throw Error(ErrorCode::kInvalidArgument, "graph", "direction must be in, out or both");
}

ConceptGraph::ConceptGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) node_index_[nodes_[i].id] = i;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_index_[{edges_[i].from, edges_[i].to}] = i;
  }
}

const GraphNode* ConceptGraph::node(const std::string& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const GraphEdge* ConceptGraph::edge(const std::string& from, const std::string& to) const {
  auto it = edge_index_.find({from, to});
  return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

std::vector<Neighbor> ConceptGraph::neighbors(const std::string& id, Direction direction,
                                              std::size_t top_r) const {
  if (node(id) == nullptr) {
    throw Error(ErrorCode::kNotFound, "graph", "unknown concept '" + id + "'");
  }
  std::map<std::string, Neighbor> best;
  auto offer = [&](const GraphEdge& e, bool outgoing) {
    Neighbor n{outgoing ? e.to : e.from, e.weight, e.support_count, e.relation, outgoing};
    auto [it, inserted] = best.emplace(n.concept_id, n);
    if (!inserted && n.confidence > it->second.confidence) it->second = n;
  };
  for (const auto& e : edges_) {
    if (direction != Direction::kIn && e.from == id) offer(e, true);
    if (direction != Direction::kOut && e.to == id) offer(e, false);
  }
  std::vector<Neighbor> out;
  for (auto& [key, n] : best) out.push_back(std::move(n));
  std::stable_sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support_count != b.support_count) return a.support_count > b.support_count;
    return a.concept_id < b.concept_id;
  });
  if (top_r > 0 && out.size() > top_r) out.resize(top_r);
  return out;
}

const std::vector<ProvenanceEntry>& ConceptGraph::edge_provenance(const std::string& from,
                                                                  const std::string& to) const {
  const GraphEdge* e = edge(from, to);
  if (e == nullptr) {
    throw Error(ErrorCode::kNotFound, "graph", "no edge " + from + " -> " + to);
  }
  return e->provenance;
}

std::string ConceptGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph concepts {\n";
  for (const auto& n : nodes_) {
    std::string title;
    for (std::size_t i = 0; i < n.title_spans.size(); ++i) {
      if (i > 0) title += " | ";
      title += n.title_spans[i];
    }
    out << "  \"" << dot_escape(n.id) << "\" [label=\"" << dot_escape(n.id) << ": "
        << dot_escape(title) << "\", shape="
        << (n.kind == SpanLabel::kPurpose ? "ellipse" : "box") << "];\n";
  }
  for (const auto& e : edges_) {
    char weight[32];
    std::snprintf(weight, sizeof(weight), "%.4f", e.weight);
    out << "  \"" << dot_escape(e.from) << "\" -> \"" << dot_escape(e.to) << "\" [label=\""
        << relation_name(e.relation) << " " << weight << "\", weight=" << e.support_count
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<GraphNode> graph_nodes(const ConceptSet& purpose, const ConceptSet& mechanism) {
  std::vector<GraphNode> nodes;
  for (const auto* set : {&purpose, &mechanism}) {
    for (const auto& c : set->concepts) {
      nodes.push_back({c.id, c.kind, c.title_spans, c.members.size()});
    }
  }
  return nodes;
}

ConceptGraph build_graph(const std::vector<Rule>& rules, const std::vector<Transaction>& transactions,
                         const std::vector<GraphNode>& nodes, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "build_graph", "tau must lie in (0, 1]");
  }
  std::map<std::string, SpanLabel> kind;
  for (const auto& n : nodes) kind[n.id] = n.kind;
  std::map<std::pair<std::string, std::string>, const Rule*> by_pair;
  for (const auto& r : rules) by_pair[{r.antecedent, r.consequent}] = &r;
  auto strong = [&](const Rule* r) { return r != nullptr && r->confidence + 1e-12 >= tau; };

  std::vector<GraphEdge> edges;
  for (const auto& r : rules) {
    auto rev_it = by_pair.find({r.consequent, r.antecedent});
    const Rule* reverse = rev_it == by_pair.end() ? nullptr : rev_it->second;
    RelationType type;
    if (strong(&r)) {
      const auto ka = kind.find(r.antecedent);
      const auto kb = kind.find(r.consequent);
      if (ka == kind.end() || kb == kind.end()) {
        throw Error(ErrorCode::kValidation, "build_graph", "rule references unknown concept");
      }
      if (ka->second != kb->second) {
        type = RelationType::kFunctionality;
      } else {
        type = strong(reverse) ? RelationType::kSimilar : RelationType::kSub;
      }
    } else if (strong(reverse)) {
      continue;  // the pair is already represented by the strong direction
    } else {
      type = RelationType::kCooccur;
    }
    GraphEdge e;
    e.from = r.antecedent;
    e.to = r.consequent;
    e.weight = r.confidence;
    e.support_count = r.support_count;
    e.relation = type;
    for (const auto& t : transactions) {
      const std::string* a = t.evidence(r.antecedent);
      const std::string* b = t.evidence(r.consequent);
      if (a != nullptr && b != nullptr) e.provenance.push_back({t.doc_id, *a, *b});
    }
    edges.push_back(std::move(e));
  }
  return ConceptGraph(nodes, std::move(edges));
}

}  // namespace facetgraph
