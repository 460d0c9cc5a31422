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

#ifndef FACETGRAPH_CORPUS_HPP_
#define FACETGRAPH_CORPUS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace facetgraph {

enum class SpanLabel { kPurpose, kMechanism };
enum class SourceTag { kBronze, kGold, kPredicted, kHeuristic };

const char* label_name(SpanLabel label);
SpanLabel parse_label(std::string_view name);
const char* source_name(SourceTag tag);
SourceTag parse_source(std::string_view name);

// A labeled region of a document. Offsets are Unicode code points into the
// document text, half-open.
struct Span {
  SpanLabel label = SpanLabel::kPurpose;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  // Only prediction files carry a confidence.
  std::optional<double> confidence;

  bool operator==(const Span&) const = default;
};

struct Document {
  std::string id;
  std::string title;
  std::string text;
  std::vector<Span> spans;
  SourceTag source = SourceTag::kGold;

  bool operator==(const Document&) const = default;
};

// Stable identifier of a span inside a corpus: "<doc_id>#<span index>".
std::string span_id(std::string_view doc_id, std::size_t span_index);

struct SpanRef {
  std::size_t doc = 0;
  std::size_t span = 0;
  bool operator==(const SpanRef&) const = default;
};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t purpose_spans = 0;
  std::size_t mechanism_spans = 0;
  std::size_t tokens = 0;
  std::size_t purpose_tokens = 0;
  std::size_t mechanism_tokens = 0;

  double purpose_share() const;
  double mechanism_share() const;
  double other_share() const;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  const Document& at(std::size_t i) const { return documents_.at(i); }

  // nullptr when the id is unknown.
  const Document* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

  // Every span of the given label, in document order.
  std::vector<SpanRef> spans_of(SpanLabel label) const;
  const Span& span(const SpanRef& ref) const;
  std::string span_id(const SpanRef& ref) const;
  std::optional<SpanRef> resolve(std::string_view span_id) const;

  CorpusStats stats() const;

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct Token {
  std::string surface;
  std::size_t start = 0;  // code points
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Whitespace split with punctuation detached. A hyphen or apostrophe between
// two word characters stays inside the word ("Wi-Fi", "it's").
std::vector<Token> tokenize(std::string_view text);

// A token belongs to a span when the token's first code point lies inside it.
inline bool token_in_span(const Token& token, const Span& span) {
  return token.start >= span.start && token.start < span.end;
}

// UTF-8 helpers over code-point offsets.
std::size_t utf8_length(std::string_view text);
std::string utf8_substr(std::string_view text, std::size_t start, std::size_t end);

// Validates offsets and fills in span surfaces. Throws Error(kValidation).
void validate_document(Document& doc);

Document parse_document(std::string_view json_line);
std::string serialize_document(const Document& doc);

// Line-delimited record file. Errors name the line number or document id.
Corpus load_corpus(const std::string& path);
Corpus read_corpus(std::istream& in, const std::string& origin = "<stream>");
void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::string& path);

}  // namespace facetgraph

#endif  // FACETGRAPH_CORPUS_HPP_
