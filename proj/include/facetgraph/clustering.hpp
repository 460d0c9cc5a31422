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

#ifndef FACETGRAPH_CLUSTERING_HPP_
#define FACETGRAPH_CLUSTERING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facetgraph/corpus.hpp"
#include "facetgraph/embedding.hpp"
#include "facetgraph/rng.hpp"
#include "facetgraph/vecmath.hpp"

namespace facetgraph {

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<Vec> centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Inertia after every Lloyd iteration; non-increasing.
  std::vector<double> inertia_trace;
};

struct KMeansOptions {
  std::size_t max_iters = 100;
  double tol = 1e-4;
};

// K-Means++ seeding followed by Lloyd iterations. Throws when k exceeds the
// number of distinct points or dimensions disagree.
KMeansResult kmeans_pp(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                       const KMeansOptions& options = {});

// Best of `restarts` runs (seeds seed, seed+1, ...) by inertia.
KMeansResult kmeans_best_of(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                            std::size_t restarts, const KMeansOptions& options = {});

std::size_t count_distinct(const std::vector<Vec>& points);

// Mean silhouette with Euclidean distance; singletons score 0. With
// sample_limit > 0 and more points than that, a seeded uniform subsample is
// scored against itself.
double silhouette(const std::vector<Vec>& points, const std::vector<std::size_t>& assignments,
                  std::size_t sample_limit = 0, std::uint64_t seed = 0);

enum class KSelection { kKnee, kArgmax };

struct ClusteringConfig {
  std::optional<std::size_t> k;  // nullopt selects K automatically
  std::vector<std::size_t> k_grid = default_grid();
  std::uint64_t seed = 13;
  std::size_t max_iters = 100;
  double tol = 1e-4;
  std::size_t silhouette_sample = 2000;
  std::size_t restarts = 4;
  std::size_t title_count = 3;
  KSelection selection = KSelection::kKnee;

  static std::vector<std::size_t> default_grid();
};

struct KTracePoint {
  std::size_t k = 0;
  double silhouette = 0.0;
};

struct KSelectionResult {
  std::size_t k = 0;
  std::vector<KTracePoint> trace;
  bool no_pronounced_knee = false;
};

KSelectionResult select_k(const std::vector<Vec>& points, const ClusteringConfig& config);

struct Concept {
  std::string id;
  SpanLabel kind = SpanLabel::kPurpose;
  std::vector<std::string> member_span_ids;
  std::vector<SpanRef> members;
  Vec centroid;
  std::vector<std::string> title_spans;
};

struct ConceptSet {
  SpanLabel kind = SpanLabel::kPurpose;
  std::vector<Concept> concepts;
  // Audit record of how K was obtained.
  std::size_t chosen_k = 0;
  bool auto_k = false;
  std::vector<KTracePoint> trace;
  std::vector<std::string> warnings;
  // OOV spans cannot be clustered and belong to no concept.
  std::vector<std::string> unclustered_span_ids;
};

// Clusters every span of `kind` independently of the other kind.
ConceptSet build_concepts(const Corpus& corpus, const SpanEmbeddings& embeddings, SpanLabel kind,
                          const ClusteringConfig& config);

}  // namespace facetgraph

#endif  // FACETGRAPH_CLUSTERING_HPP_
