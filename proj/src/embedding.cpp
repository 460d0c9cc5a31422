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

#include "facetgraph/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "facetgraph/error.hpp"
#include "json.hpp"

namespace facetgraph {
namespace {

// The NLTK English stopword list.
const char* const kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn",
    "wouldn't"};

const std::unordered_set<std::string_view>& stopword_set() {
  static const std::unordered_set<std::string_view> set(std::begin(kStopwords),
                                                        std::end(kStopwords));
  return set;
}

bool all_punct(std::string_view token) {
  return std::all_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
  });
}

const char* skip_blank(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p;
}

}  // namespace

bool WordVectorTable::insert(std::string_view token, Vec vector) {
  if (vector.size() != dim_) return false;
  return entries_.emplace(ascii_lower(token), std::move(vector)).second;
}

const Vec* WordVectorTable::lookup(std::string_view token) const {
  auto it = entries_.find(ascii_lower(token));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_stopword(std::string_view lowercase_token) {
  return stopword_set().count(lowercase_token) > 0 || all_punct(lowercase_token);
}

const std::vector<std::string>& stopword_list() {
  static const std::vector<std::string> list(std::begin(kStopwords), std::end(kStopwords));
  return list;
}

WordVectorTable load_vectors(const std::string& path, std::size_t dim, VectorLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "load_vectors", "cannot open vector file '" + path + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  VectorLoadReport local;
  WordVectorTable table(dim);
  bool dim_known = dim > 0;
  std::vector<double> values;
  const char* p = data.data();
  const char* const end = p + data.size();
  while (p < end) {
    const char* eol = static_cast<const char*>(std::memchr(p, '\n', static_cast<std::size_t>(end - p)));
    if (eol == nullptr) eol = end;
    const char* q = skip_blank(p, eol);
    if (q == eol) {
      p = eol + 1;
      continue;
    }
    const char* word_end = q;
    while (word_end < eol && *word_end != ' ' && *word_end != '\t') ++word_end;
    const std::string_view word(q, static_cast<std::size_t>(word_end - q));
    values.clear();
    bool ok = true;
    q = skip_blank(word_end, eol);
    while (q < eol) {
      double x = 0.0;
      auto [next, ec] = std::from_chars(q, eol, x);
      if (ec != std::errc() || next == q) {
        ok = false;
        break;
      }
      values.push_back(x);
      q = skip_blank(next, eol);
    }
    if (ok && !dim_known && !values.empty()) {
      table = WordVectorTable(values.size());
      dim_known = true;
    }
    if (ok && dim_known && values.size() == table.dim()) {
      if (table.insert(word, values)) ++local.loaded;
    } else {
      ++local.skipped;
    }
    p = eol + 1;
  }
  if (table.size() == 0) {
    throw Error(ErrorCode::kValidation, "load_vectors",
                "no valid vector lines in '" + path + "' (" + std::to_string(local.skipped) +
                    " rejected)");
  }
  if (report) *report = local;
  return table;
}

SpanVector embed_text(std::string_view text, const WordVectorTable& table,
                      const EmbedOptions& options) {
  SpanVector out;
  out.values.assign(table.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& token : tokenize(text)) {
    const std::string key = ascii_lower(token.surface);
    if (is_stopword(key)) continue;
    const Vec* v = table.lookup(key);
    if (v == nullptr) continue;
    if (options.normalize_words) {
      const double n = norm(*v);
      if (n == 0.0) continue;
      for (std::size_t i = 0; i < v->size(); ++i) out.values[i] += (*v)[i] / n;
    } else {
      for (std::size_t i = 0; i < v->size(); ++i) out.values[i] += (*v)[i];
    }
    ++used;
  }
  // Dividing by the count is absorbed by the normalization.
  out.oov = used == 0 || !normalize_in_place(out.values);
  if (out.oov) std::fill(out.values.begin(), out.values.end(), 0.0);
  return out;
}

SpanVector embed_span(const Span& span, const WordVectorTable& table, const EmbedOptions& options) {
  return embed_text(span.surface, table, options);
}

std::unordered_map<std::string, SpanVector> load_precomputed_span_vectors(
    const std::string& path, const Corpus& corpus, PrecomputedLoadReport* report) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "load_span_vectors", "cannot open span vector file '" + path + "'");
  }
  PrecomputedLoadReport local;
  std::unordered_map<std::string, SpanVector> out;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string doc_id;
    std::size_t index = 0;
    SpanVector sv;
    try {
      const auto j = nlohmann::json::parse(line);
      doc_id = j.at("doc_id").get<std::string>();
      index = j.at("span_index").get<std::size_t>();
      sv.values = j.at("vector").get<Vec>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "load_span_vectors",
                  path + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
    }
    if (dim == 0) dim = sv.values.size();
    if (sv.values.empty() || sv.values.size() != dim) {
      throw Error(ErrorCode::kValidation, "load_span_vectors",
                  path + ":" + std::to_string(line_no) + ": vector dimension " +
                      std::to_string(sv.values.size()) + " disagrees with " + std::to_string(dim));
    }
    const auto* doc = corpus.find(doc_id);
    if (doc == nullptr || index >= doc->spans.size()) {
      ++local.unknown;
      local.unknown_refs.push_back(span_id(doc_id, index));
      continue;
    }
    sv.oov = !normalize_in_place(sv.values);
    out[span_id(doc_id, index)] = std::move(sv);
    ++local.loaded;
  }
  if (report) *report = std::move(local);
  return out;
}

SpanEmbeddings embed_corpus(const Corpus& corpus, const WordVectorTable& table,
                            const std::unordered_map<std::string, SpanVector>* precomputed,
                            const EmbedOptions& options) {
  std::vector<std::vector<SpanVector>> vectors(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.at(d);
    vectors[d].reserve(doc.spans.size());
    for (std::size_t s = 0; s < doc.spans.size(); ++s) {
      if (precomputed != nullptr) {
        auto it = precomputed->find(span_id(doc.id, s));
        if (it != precomputed->end()) {
          if (it->second.values.size() != table.dim()) {
            throw Error(ErrorCode::kValidation, "embed",
                        "precomputed vector for " + it->first + " has dimension " +
                            std::to_string(it->second.values.size()) +
                            ", word table has " + std::to_string(table.dim()));
          }
          vectors[d].push_back(it->second);
          continue;
        }
      }
      vectors[d].push_back(embed_span(doc.spans[s], table, options));
    }
  }
  return SpanEmbeddings(table.dim(), std::move(vectors));
}

}  // namespace facetgraph
