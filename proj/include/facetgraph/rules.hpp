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

#ifndef FACETGRAPH_RULES_HPP_
#define FACETGRAPH_RULES_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "facetgraph/clustering.hpp"
#include "facetgraph/corpus.hpp"

namespace facetgraph {

// Span id -> concept id for both kinds, plus spans that could not be
// clustered (OOV) and are skipped when building transactions.
struct ConceptAssignment {
  std::unordered_map<std::string, std::string> concept_of_span;
  std::unordered_set<std::string> unclustered;
  std::map<std::string, SpanLabel> kind_of_concept;

  void add(const ConceptSet& set);
};

struct Transaction {
  std::string doc_id;
  std::vector<std::string> concept_ids;  // sorted, unique
  // First span of the document supporting each concept, keyed like concept_ids.
  std::vector<std::string> evidence_span_ids;

  bool contains(const std::string& concept_id) const;
  const std::string* evidence(const std::string& concept_id) const;
};

std::vector<Transaction> build_transactions(const Corpus& corpus, const ConceptAssignment& assignment);

struct Rule {
  std::string antecedent;
  std::string consequent;
  std::size_t support_count = 0;     // n(A and B)
  std::size_t antecedent_count = 0;  // n(A)
  std::size_t consequent_count = 0;  // n(B)
  double confidence = 0.0;           // n(A and B) / n(A)

  bool operator==(const Rule&) const = default;
};

struct RuleMiningConfig {
  std::size_t min_support_count = 3;
  double min_confidence = 0.5;
};

// Apriori pass restricted to single-item antecedents and consequents. Both
// directions of every frequent pair are evaluated. Ordered by confidence,
// then support (both descending), then ids.
std::vector<Rule> mine_rules(const std::vector<Transaction>& transactions,
                             const RuleMiningConfig& config);

enum class RelationType { kSub, kSimilar, kFunctionality, kCooccur };
const char* relation_name(RelationType type);
RelationType parse_relation(std::string_view name);

struct ProvenanceEntry {
  std::string doc_id;
  std::string from_span_id;
  std::string to_span_id;

  bool operator==(const ProvenanceEntry&) const = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  double weight = 0.0;  // rule confidence
  std::size_t support_count = 0;
  RelationType relation = RelationType::kCooccur;
  std::vector<ProvenanceEntry> provenance;
};

struct GraphNode {
  std::string id;
  SpanLabel kind = SpanLabel::kPurpose;
  std::vector<std::string> title_spans;
  std::size_t size = 0;
};

enum class Direction { kIn, kOut, kBoth };
Direction parse_direction(std::string_view name);

struct Neighbor {
  std::string concept_id;
  double confidence = 0.0;
  std::size_t support_count = 0;
  RelationType relation = RelationType::kCooccur;
  bool outgoing = true;
};

class ConceptGraph {
 public:
  ConceptGraph() = default;
  ConceptGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphNode* node(const std::string& id) const;
  const GraphEdge* edge(const std::string& from, const std::string& to) const;

  // Sorted by confidence (then support) descending, ties by id; top_r == 0
  // keeps everything.
  std::vector<Neighbor> neighbors(const std::string& id, Direction direction,
                                  std::size_t top_r) const;
  const std::vector<ProvenanceEntry>& edge_provenance(const std::string& from,
                                                      const std::string& to) const;

  // Graphviz rendering for external viewers.
  std::string to_dot() const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::map<std::string, std::size_t> node_index_;
  std::map<std::pair<std::string, std::string>, std::size_t> edge_index_;
};

// Edge typing for a concept pair {A, B} with retained rules:
//   some direction reaches tau -> only directions >= tau become edges;
//     same kind, both directions -> similar; one direction -> sub;
//     different kinds -> functionality;
//   neither direction reaches tau -> every retained direction is a cooccur edge.
ConceptGraph build_graph(const std::vector<Rule>& rules, const std::vector<Transaction>& transactions,
                         const std::vector<GraphNode>& nodes, double tau);

std::vector<GraphNode> graph_nodes(const ConceptSet& purpose, const ConceptSet& mechanism);

}  // namespace facetgraph

#endif  // FACETGRAPH_RULES_HPP_
