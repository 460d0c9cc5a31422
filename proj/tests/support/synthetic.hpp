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

#ifndef FACETGRAPH_TESTS_SYNTHETIC_HPP_
#define FACETGRAPH_TESTS_SYNTHETIC_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "facetgraph/clustering.hpp"
#include "facetgraph/corpus.hpp"
#include "facetgraph/embedding.hpp"
#include "facetgraph/rules.hpp"

namespace synthetic {

using facetgraph::Corpus;
using facetgraph::Document;
using facetgraph::Span;
using facetgraph::SpanLabel;

struct LabelShares {
  double purpose = 0.159;
  double mechanism = 0.145;
};

// One labelled token per position: 'p', 'm' or 'o'.
inline std::vector<char> draw_labels(std::size_t n, const LabelShares& shares, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<char> out(n);
  for (auto& c : out) {
    const double x = u(gen);
    c = x < shares.purpose ? 'p' : (x < shares.purpose + shares.mechanism ? 'm' : 'o');
  }
  return out;
}

// Documents of "tok tok tok ..." with every labelled token as its own span.
inline Corpus label_corpus(const std::vector<char>& labels, std::size_t per_doc) {
  std::vector<Document> docs;
  for (std::size_t start = 0; start < labels.size(); start += per_doc) {
    Document d;
    d.id = "syn" + std::to_string(docs.size());
    const std::size_t n = std::min(per_doc, labels.size() - start);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) d.text += ' ';
      d.text += "tok";
      const char c = labels[start + i];
      if (c == 'o') continue;
      d.spans.push_back({c == 'p' ? SpanLabel::kPurpose : SpanLabel::kMechanism, 4 * i, 4 * i + 3, "tok",
                         std::nullopt});
    }
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

// Expected token-level micro F1 of a guesser that labels each token
// independently with the gold label shares: precision and recall both equal
// (p^2 + m^2) / (p + m).
inline double analytic_random_micro_f1(const LabelShares& s) {
  return (s.purpose * s.purpose + s.mechanism * s.mechanism) / (s.purpose + s.mechanism);
}

struct PipelineCorpus {
  Corpus corpus;
  facetgraph::SpanEmbeddings embeddings;
};

// Random documents whose span vectors are noisy copies of a few prototypes,
// so that concepts co-occur often enough to yield rules.
inline PipelineCorpus random_pipeline_corpus(std::size_t docs, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  const std::size_t dim = 6;
  std::vector<facetgraph::Vec> prototypes;
  for (std::size_t p = 0; p < dim; ++p) {
    facetgraph::Vec v(dim, 0.0);
    v[p] = 1.0;
    prototypes.push_back(v);
  }
  std::vector<Document> out;
  std::vector<std::vector<facetgraph::SpanVector>> vecs;
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    doc.id = "r" + std::to_string(d);
    const std::size_t spans = 1 + gen() % 4;
    std::vector<facetgraph::SpanVector> dv;
    const std::size_t theme = gen() % 3;
    for (std::size_t s = 0; s < spans; ++s) {
      if (s) doc.text += ' ';
      const std::size_t start = doc.text.size();
      doc.text += "w" + std::to_string(s);
      const bool purpose = s % 2 == 0;
      doc.spans.push_back({purpose ? SpanLabel::kPurpose : SpanLabel::kMechanism, start, doc.text.size(),
                           doc.text.substr(start), std::nullopt});
      const std::size_t proto = (purpose ? 0 : 3) + (gen() % 4 == 0 ? gen() % 3 : theme);
      facetgraph::Vec v = prototypes[proto];
      for (auto& x : v) x += noise(gen);
      facetgraph::normalize_in_place(v);
      dv.push_back({v, false});
    }
    out.push_back(std::move(doc));
    vecs.push_back(std::move(dv));
  }
  return {Corpus(std::move(out)), facetgraph::SpanEmbeddings(dim, std::move(vecs))};
}

struct PipelineGraph {
  facetgraph::ConceptAssignment assignment;
  std::vector<facetgraph::Transaction> transactions;
  facetgraph::ConceptGraph graph;
};

inline PipelineGraph run_pipeline(const PipelineCorpus& pc, std::size_t k, std::uint64_t seed) {
  facetgraph::ClusteringConfig cc;
  cc.k = k;
  cc.seed = seed;
  const auto purpose = facetgraph::build_concepts(pc.corpus, pc.embeddings, SpanLabel::kPurpose, cc);
  const auto mechanism = facetgraph::build_concepts(pc.corpus, pc.embeddings, SpanLabel::kMechanism, cc);
  PipelineGraph out;
  out.assignment.add(purpose);
  out.assignment.add(mechanism);
  out.transactions = facetgraph::build_transactions(pc.corpus, out.assignment);
  const auto rules = facetgraph::mine_rules(out.transactions, {2, 0.3});
  out.graph = facetgraph::build_graph(rules, out.transactions, facetgraph::graph_nodes(purpose, mechanism), 0.6);
  return out;
}

// Empty when every provenance entry of every edge names a document holding a
// member span of both endpoint concepts, and the entries cover exactly the
// documents containing both concepts.
inline std::string graph_soundness_violation(const Corpus& corpus, const PipelineGraph& pg) {
  for (const auto& e : pg.graph.edges()) {
    std::vector<std::string> docs_with_both;
    for (const auto& doc : corpus.documents()) {
      bool has_from = false, has_to = false;
      for (std::size_t s = 0; s < doc.spans.size(); ++s) {
        auto it = pg.assignment.concept_of_span.find(facetgraph::span_id(doc.id, s));
        if (it == pg.assignment.concept_of_span.end()) continue;
        has_from = has_from || it->second == e.from;
        has_to = has_to || it->second == e.to;
      }
      if (has_from && has_to) docs_with_both.push_back(doc.id);
    }
    if (docs_with_both.size() != e.provenance.size()) {
      return e.from + "->" + e.to + ": provenance covers " + std::to_string(e.provenance.size()) + " of " +
             std::to_string(docs_with_both.size()) + " documents";
    }
    for (std::size_t i = 0; i < e.provenance.size(); ++i) {
      const auto& p = e.provenance[i];
      if (p.doc_id != docs_with_both[i]) return e.from + "->" + e.to + ": unexpected document " + p.doc_id;
      for (const auto& [span, concept_id] : {std::pair{p.from_span_id, e.from}, std::pair{p.to_span_id, e.to}}) {
        const auto ref = corpus.resolve(span);
        if (!ref || corpus.at(ref->doc).id != p.doc_id) return "span " + span + " is not in " + p.doc_id;
        auto it = pg.assignment.concept_of_span.find(span);
        if (it == pg.assignment.concept_of_span.end() || it->second != concept_id) {
          return "span " + span + " is not a member of " + concept_id;
        }
      }
    }
  }
  return {};
}

}  // namespace synthetic

#endif  // FACETGRAPH_TESTS_SYNTHETIC_HPP_
