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


#ifndef FACETGRAPH_BUNDLE_HPP_
#define FACETGRAPH_BUNDLE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "facetgraph/clustering.hpp"
#include "facetgraph/corpus.hpp"
#include "facetgraph/embedding.hpp"
#include "facetgraph/records.hpp"
#include "facetgraph/rules.hpp"
#include "facetgraph/search.hpp"

namespace facetgraph {

inline constexpr const char* kBundleFormatVersion = "1";

struct BuildConfig {
  std::string corpus_path;
  std::string vectors_path;
  std::string span_vectors_path;  // optional precomputed span vectors
  std::size_t dim = 0;            // 0 infers from the vectors file
  EmbedOptions embed;
  ClusteringConfig purpose_clustering;
  ClusteringConfig mechanism_clustering;
  RuleMiningConfig mining;
  double tau = 0.6;
};

// Applies one named setting given as text. Keys: corpus, vectors,
// span_vectors, dim, normalize_words, seed, purpose_seed, mechanism_seed,
// k, purpose_k, mechanism_k, k_grid, restarts, max_iters, tol,
// silhouette_sample, title_count, selection, min_support, min_confidence, tau.
// A k of "auto" selects K from the grid.
void apply_setting(BuildConfig& config, const std::string& key, const std::string& value);

// Layers defaults < config file < FFS_* environment < explicit overrides.
BuildConfig resolve_build_config(const std::optional<std::string>& config_file,
                                 const std::map<std::string, std::string>& overrides);

Json config_to_json(const BuildConfig& config);

// Loaded, immutable bundle contents.
struct Bundle {
  std::string directory;
  std::string build_id;
  Json manifest;
  Corpus corpus;
  WordVectorTable table;
  SpanEmbeddings embeddings;
  ProductIndex index;
  ConceptSet purpose;
  ConceptSet mechanism;
  std::vector<Rule> rules;
  ConceptGraph graph;
  EmbedOptions embed_options;
};

struct BuildReport {
  std::string build_id;
  std::string directory;
  Json manifest;
  double seconds = 0.0;
};

// embed -> index -> cluster -> mine -> graph, written to `out_dir`. On failure
// nothing is left behind and the error names the failing stage. An existing
// `out_dir` must be empty or hold a previous bundle, which is replaced.
BuildReport build_index(const BuildConfig& config, const std::string& out_dir);

// Verifies digests and build ids of every artifact.
std::shared_ptr<const Bundle> load_bundle(const std::string& dir);

}  // namespace facetgraph

#endif  // FACETGRAPH_BUNDLE_HPP_
