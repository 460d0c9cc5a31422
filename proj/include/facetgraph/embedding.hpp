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

#ifndef FACETGRAPH_EMBEDDING_HPP_
#define FACETGRAPH_EMBEDDING_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "facetgraph/corpus.hpp"
#include "facetgraph/vecmath.hpp"

namespace facetgraph {

// Pretrained word vectors in the usual text layout: a token followed by `dim`
// reals per line. Keys are lowercased; the first occurrence of a key wins.
class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  // Returns false when the key already exists or the arity is wrong.
  bool insert(std::string_view token, Vec vector);
  const Vec* lookup(std::string_view token) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Vec> entries_;
};

struct VectorLoadReport {
  std::size_t loaded = 0;
  std::size_t skipped = 0;  // wrong arity or unparsable
};

// dim == 0 infers the dimension from the first line.
WordVectorTable load_vectors(const std::string& path, std::size_t dim,
                             VectorLoadReport* report = nullptr);

// Unit-norm span embedding, or the zero vector with `oov` set when no token
// of the input contributed.
struct SpanVector {
  Vec values;
  bool oov = true;

  bool operator==(const SpanVector&) const = default;
};

struct EmbedOptions {
  // Normalize each word vector before averaging. Off by default: raw word
  // vectors are averaged and only the mean is normalized.
  bool normalize_words = false;
};

bool is_stopword(std::string_view lowercase_token);
const std::vector<std::string>& stopword_list();
std::string ascii_lower(std::string_view s);

SpanVector embed_text(std::string_view text, const WordVectorTable& table,
                      const EmbedOptions& options = {});
SpanVector embed_span(const Span& span, const WordVectorTable& table,
                      const EmbedOptions& options = {});

struct PrecomputedLoadReport {
  std::size_t loaded = 0;
  std::size_t unknown = 0;  // records whose (doc_id, span_index) is not in the corpus
  std::vector<std::string> unknown_refs;
};

// Records {doc_id, span_index, vector}; vectors are normalized on load. Keys
// are span ids ("doc#index"). Throws on dimension disagreement.
std::unordered_map<std::string, SpanVector> load_precomputed_span_vectors(
    const std::string& path, const Corpus& corpus, PrecomputedLoadReport* report = nullptr);

// Per-document, per-span embeddings aligned with the corpus.
class SpanEmbeddings {
 public:
  SpanEmbeddings() = default;
  SpanEmbeddings(std::size_t dim, std::vector<std::vector<SpanVector>> vectors)
      : dim_(dim), vectors_(std::move(vectors)) {}

  std::size_t dim() const { return dim_; }
  const SpanVector& at(const SpanRef& ref) const { return vectors_.at(ref.doc).at(ref.span); }
  const std::vector<SpanVector>& document(std::size_t doc) const { return vectors_.at(doc); }
  std::size_t documents() const { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<SpanVector>> vectors_;
};

// Embeds every span; entries of `precomputed` take precedence over the table.
SpanEmbeddings embed_corpus(const Corpus& corpus, const WordVectorTable& table,
                            const std::unordered_map<std::string, SpanVector>* precomputed = nullptr,
                            const EmbedOptions& options = {});

}  // namespace facetgraph

#endif  // FACETGRAPH_EMBEDDING_HPP_
