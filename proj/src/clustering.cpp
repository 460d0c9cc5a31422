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

#include "facetgraph/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "facetgraph/error.hpp"

namespace facetgraph {
namespace {

// A knee must stand out from its neighbours by this fraction of its own
// silhouette value to count as pronounced.
constexpr double kKneeProminence = 0.1;

std::size_t nearest_centroid(const Vec& point, const std::vector<Vec>& centroids, double* dist) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

std::vector<Vec> seed_plus_plus(const std::vector<Vec>& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Vec> centers;
  centers.reserve(k);
  centers.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);
  while (centers.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] == 0.0) continue;
        cumulative += d2[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // Rounding left the target past the last positive weight.
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    if (pick == n) {
      throw Error(ErrorCode::kInternal, "cluster", "k-means++ seeding ran out of distinct points");
    }
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
  }
  return centers;
}

void check_points(const std::vector<Vec>& points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "cluster", "no points to cluster");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "cluster",
                  "dimension mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(dim));
    }
  }
}

}  // namespace

std::size_t count_distinct(const std::vector<Vec>& points) {
  std::set<Vec> distinct(points.begin(), points.end());
  return distinct.size();
}

KMeansResult kmeans_pp(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                       const KMeansOptions& options) {
  check_points(points);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "cluster", "k must be >= 1");
  const std::size_t distinct = count_distinct(points);
  if (k > distinct) {
    throw Error(ErrorCode::kInvalidArgument, "cluster",
                "k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                    " distinct points");
  }
  const std::size_t n = points.size();
  const std::size_t dim = points.front().size();
  Rng rng(seed);

  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignments.assign(n, 0);
  std::vector<double> dist(n);

  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      result.assignments[i] = nearest_centroid(points[i], result.centroids, &dist[i]);
    }
    std::vector<std::size_t> counts(k, 0);
    for (auto a : result.assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Re-seed an empty cluster with the point farthest from its centroid.
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[result.assignments[i]] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far == n) break;
      --counts[result.assignments[far]];
      result.assignments[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
    }

    std::vector<Vec> next(k, Vec(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      auto& sum = next[result.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) sum[d] += points[i][d];
    }
    double displacement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        next[c] = result.centroids[c];
        continue;
      }
      for (auto& x : next[c]) x /= static_cast<double>(counts[c]);
      displacement = std::max(displacement, std::sqrt(squared_distance(next[c], result.centroids[c])));
    }
    result.centroids = std::move(next);

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inertia += squared_distance(points[i], result.centroids[result.assignments[i]]);
    }
    result.inertia_trace.push_back(inertia);
    result.inertia = inertia;
    result.iterations = iter + 1;
    if (displacement < options.tol) break;
  }
  return result;
}

KMeansResult kmeans_best_of(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed,
                            std::size_t restarts, const KMeansOptions& options) {
  KMeansResult best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    auto run = kmeans_pp(points, k, seed + r, options);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

double silhouette(const std::vector<Vec>& points, const std::vector<std::size_t>& assignments,
                  std::size_t sample_limit, std::uint64_t seed) {
  if (points.size() != assignments.size()) {
    throw Error(ErrorCode::kInvalidArgument, "silhouette", "points and assignments differ in size");
  }
  std::vector<std::size_t> sample(points.size());
  std::iota(sample.begin(), sample.end(), std::size_t{0});
  if (sample_limit > 0 && points.size() > sample_limit) {
    Rng rng(seed);
    // Partial Fisher-Yates: the first sample_limit entries are a uniform subset.
    for (std::size_t i = 0; i < sample_limit; ++i) {
      std::swap(sample[i], sample[i + rng.below(sample.size() - i)]);
    }
    sample.resize(sample_limit);
    std::sort(sample.begin(), sample.end());
  }

  std::map<std::size_t, std::size_t> cluster_index;
  for (auto i : sample) cluster_index.emplace(assignments[i], 0);
  if (cluster_index.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "silhouette", "silhouette needs at least 2 clusters");
  }
  std::size_t next_id = 0;
  for (auto& [label, id] : cluster_index) id = next_id++;
  const std::size_t c = cluster_index.size();
  std::vector<std::size_t> sizes(c, 0);
  std::vector<std::size_t> local(sample.size());
  for (std::size_t s = 0; s < sample.size(); ++s) {
    local[s] = cluster_index[assignments[sample[s]]];
    ++sizes[local[s]];
  }

  double total = 0.0;
  std::vector<double> sums(c);
  for (std::size_t s = 0; s < sample.size(); ++s) {
    if (sizes[local[s]] == 1) continue;  // singleton contributes 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t t = 0; t < sample.size(); ++t) {
      if (t == s) continue;
      sums[local[t]] += std::sqrt(squared_distance(points[sample[s]], points[sample[t]]));
    }
    const double a = sums[local[s]] / static_cast<double>(sizes[local[s]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c; ++k) {
      if (k != local[s]) b = std::min(b, sums[k] / static_cast<double>(sizes[k]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(sample.size());
}

std::vector<std::size_t> ClusteringConfig::default_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t k = 25; k <= 400; k += 25) grid.push_back(k);
  return grid;
}

KSelectionResult select_k(const std::vector<Vec>& points, const ClusteringConfig& config) {
  check_points(points);
  const std::size_t distinct = count_distinct(points);
  const std::size_t upper = std::min(points.size() - 1, distinct);
  std::vector<std::size_t> grid;
  for (auto k : config.k_grid) {
    if (k >= 2 && k <= upper) grid.push_back(k);
  }
  if (!std::is_sorted(config.k_grid.begin(), config.k_grid.end())) {
    throw Error(ErrorCode::kInvalidArgument, "select_k", "k grid must be sorted ascending");
  }
  if (grid.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "select_k",
                "k grid infeasible for " + std::to_string(points.size()) + " points (" +
                    std::to_string(grid.size()) + " usable candidates, need 3)");
  }

  KSelectionResult result;
  const KMeansOptions options{config.max_iters, config.tol};
  for (auto k : grid) {
    const auto run = kmeans_best_of(points, k, config.seed, config.restarts, options);
    result.trace.push_back(
        {k, silhouette(points, run.assignments, config.silhouette_sample, config.seed)});
  }

  if (config.selection == KSelection::kArgmax) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
      if (result.trace[i].silhouette > result.trace[best].silhouette) best = i;
    }
    result.k = result.trace[best].k;
  } else {
    // Knee: the interior point whose marginal gain drops the most, i.e. the
    // most negative discrete second difference.
    std::size_t best = 1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < result.trace.size(); ++i) {
      const double score = 2.0 * result.trace[i].silhouette - result.trace[i - 1].silhouette -
                           result.trace[i + 1].silhouette;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    result.k = result.trace[best].k;
    const double scale = std::max(std::abs(result.trace[best].silhouette), 1e-12);
    result.no_pronounced_knee = best_score < kKneeProminence * scale;
  }
  if (config.k) result.k = *config.k;
  return result;
}

ConceptSet build_concepts(const Corpus& corpus, const SpanEmbeddings& embeddings, SpanLabel kind,
                          const ClusteringConfig& config) {
  ConceptSet set;
  set.kind = kind;
  std::vector<SpanRef> refs;
  std::vector<Vec> points;
  for (const auto& ref : corpus.spans_of(kind)) {
    const auto& v = embeddings.at(ref);
    if (v.oov) {
      set.unclustered_span_ids.push_back(corpus.span_id(ref));
      continue;
    }
    refs.push_back(ref);
    points.push_back(v.values);
  }
  const std::string stage = std::string("cluster_") + label_name(kind);
  if (points.empty()) {
    throw Error(ErrorCode::kValidation, stage, std::string("no embeddable ") + label_name(kind) + " spans");
  }

  const std::size_t distinct = count_distinct(points);
  std::size_t k = 0;
  if (config.k) {
    k = *config.k;
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, stage, "k must be >= 1");
    if (points.size() < k) {
      throw Error(ErrorCode::kValidation, stage,
                  "fewer spans (" + std::to_string(points.size()) + ") than k = " + std::to_string(k));
    }
    if (distinct < k) {
      set.warnings.push_back("k reduced from " + std::to_string(k) + " to " +
                             std::to_string(distinct) + " distinct span vectors");
      k = distinct;
    }
  } else {
    set.auto_k = true;
    if (distinct == 1) {
      k = 1;
      set.warnings.push_back("all span vectors identical; knee detection degenerate");
    } else {
      try {
        auto sel = select_k(points, config);
        k = sel.k;
        set.trace = std::move(sel.trace);
        if (sel.no_pronounced_knee) set.warnings.push_back("no pronounced knee in silhouette trace");
      } catch (const Error& e) {
        throw Error(e.code(), stage, e.what());
      }
    }
  }
  set.chosen_k = k;

  const auto run =
      kmeans_best_of(points, k, config.seed, config.restarts, {config.max_iters, config.tol});

  // Concepts are numbered by their first member in corpus order.
  std::vector<std::size_t> order_of_cluster(k, k);
  std::size_t next_id = 0;
  for (auto a : run.assignments) {
    if (order_of_cluster[a] == k) order_of_cluster[a] = next_id++;
  }
  set.concepts.resize(next_id);
  const char prefix = kind == SpanLabel::kPurpose ? 'P' : 'M';
  for (std::size_t c = 0; c < set.concepts.size(); ++c) {
    set.concepts[c].id = std::string(1, prefix) + std::to_string(c);
    set.concepts[c].kind = kind;
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    auto& concept_ = set.concepts[order_of_cluster[run.assignments[i]]];
    concept_.members.push_back(refs[i]);
    concept_.member_span_ids.push_back(corpus.span_id(refs[i]));
  }
  for (auto& concept_ : set.concepts) {
    concept_.centroid.assign(embeddings.dim(), 0.0);
    for (const auto& ref : concept_.members) {
      const auto& v = embeddings.at(ref).values;
      for (std::size_t d = 0; d < v.size(); ++d) concept_.centroid[d] += v[d];
    }
    for (auto& x : concept_.centroid) x /= static_cast<double>(concept_.members.size());

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t m = 0; m < concept_.members.size(); ++m) {
      ranked.emplace_back(cosine(embeddings.at(concept_.members[m]).values, concept_.centroid), m);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::unordered_set<std::string> seen;
    for (const auto& [sim, m] : ranked) {
      if (concept_.title_spans.size() >= config.title_count) break;
      const auto& surface = corpus.span(concept_.members[m]).surface;
      if (seen.insert(surface).second) concept_.title_spans.push_back(surface);
    }
  }
  return set;
}

}  // namespace facetgraph
