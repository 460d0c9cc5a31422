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

#include "facetgraph/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "facetgraph/error.hpp"
#include "json.hpp"

namespace facetgraph {
namespace {

using ordered_json = nlohmann::ordered_json;

struct CodePoint {
  char32_t value;
  std::size_t byte_offset;
  std::size_t byte_length;
};

std::vector<CodePoint> decode_utf8(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    char32_t cp = lead;
    if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
      cp = lead & 0x07;
    } else if (lead >= 0xE0) {
      len = 3;
      cp = lead & 0x0F;
    } else if (lead >= 0xC0) {
      len = 2;
      cp = lead & 0x1F;
    }
    if (i + len > text.size()) len = text.size() - i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        // Invalid continuation: treat the lead byte as a single code point.
        len = 1;
        cp = lead;
        break;
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0x00A0 || c == 0x3000;
}

bool is_punct(char32_t c) {
  return c < 0x80 && ((c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
                      (c >= '[' && c <= '`') || (c >= '{' && c <= '~'));
}

bool is_word(char32_t c) { return !is_space(c) && !is_punct(c); }

Error validation_error(const std::string& message) {
  return Error(ErrorCode::kValidation, "load_corpus", message);
}

}  // namespace

const char* label_name(SpanLabel label) {
  return label == SpanLabel::kPurpose ? "purpose" : "mechanism";
}

SpanLabel parse_label(std::string_view name) {
  if (name == "purpose") return SpanLabel::kPurpose;
  if (name == "mechanism") return SpanLabel::kMechanism;
  throw Error(ErrorCode::kParse, "load_corpus",
              "unknown span label '" + std::string(name) + "'");
}

const char* source_name(SourceTag tag) {
  switch (tag) {
    case SourceTag::kBronze: return "bronze";
    case SourceTag::kGold: return "gold";
    case SourceTag::kPredicted: return "predicted";
    case SourceTag::kHeuristic: return "heuristic";
  }
  return "gold";
}

SourceTag parse_source(std::string_view name) {
  if (name == "bronze") return SourceTag::kBronze;
  if (name == "gold") return SourceTag::kGold;
  if (name == "predicted") return SourceTag::kPredicted;
  if (name == "heuristic") return SourceTag::kHeuristic;
  throw Error(ErrorCode::kParse, "load_corpus", "unknown source tag '" + std::string(name) + "'");
}

std::string span_id(std::string_view doc_id, std::size_t span_index) {
  std::string id(doc_id);
  id += '#';
  id += std::to_string(span_index);
  return id;
}

double CorpusStats::purpose_share() const {
  return tokens == 0 ? 0.0 : static_cast<double>(purpose_tokens) / static_cast<double>(tokens);
}

double CorpusStats::mechanism_share() const {
  return tokens == 0 ? 0.0
                     : static_cast<double>(mechanism_tokens) / static_cast<double>(tokens);
}

double CorpusStats::other_share() const {
  return tokens == 0 ? 0.0 : 1.0 - purpose_share() - mechanism_share();
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  by_id_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& id = documents_[i].id;
    if (id.empty()) throw validation_error("document at position " + std::to_string(i) + " has an empty id");
    if (!by_id_.emplace(id, i).second) throw validation_error("duplicate document id '" + id + "'");
  }
}

const Document* Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<SpanRef> Corpus::spans_of(SpanLabel label) const {
  std::vector<SpanRef> refs;
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const auto& spans = documents_[d].spans;
    for (std::size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].label == label) refs.push_back({d, s});
    }
  }
  return refs;
}

const Span& Corpus::span(const SpanRef& ref) const {
  return documents_.at(ref.doc).spans.at(ref.span);
}

std::string Corpus::span_id(const SpanRef& ref) const {
  return facetgraph::span_id(documents_.at(ref.doc).id, ref.span);
}

std::optional<SpanRef> Corpus::resolve(std::string_view id) const {
  const auto hash = id.rfind('#');
  if (hash == std::string_view::npos) return std::nullopt;
  const auto doc = index_of(id.substr(0, hash));
  if (!doc) return std::nullopt;
  std::size_t index = 0;
  const auto digits = id.substr(hash + 1);
  if (digits.empty()) return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    index = index * 10 + static_cast<std::size_t>(c - '0');
  }
  if (index >= documents_[*doc].spans.size()) return std::nullopt;
  return SpanRef{*doc, index};
}

CorpusStats Corpus::stats() const {
  CorpusStats stats;
  stats.documents = documents_.size();
  for (const auto& doc : documents_) {
    for (const auto& span : doc.spans) {
      if (span.label == SpanLabel::kPurpose) {
        ++stats.purpose_spans;
      } else {
        ++stats.mechanism_spans;
      }
    }
    for (const auto& token : tokenize(doc.text)) {
      ++stats.tokens;
      bool purpose = false;
      bool mechanism = false;
      for (const auto& span : doc.spans) {
        if (!token_in_span(token, span)) continue;
        (span.label == SpanLabel::kPurpose ? purpose : mechanism) = true;
      }
      // Purpose takes precedence, matching the IOB codec.
      if (purpose) {
        ++stats.purpose_tokens;
      } else if (mechanism) {
        ++stats.mechanism_tokens;
      }
    }
  }
  return stats;
}

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = decode_utf8(text);
  std::vector<Token> tokens;
  const std::size_t n = cps.size();
  auto emit = [&](std::size_t begin, std::size_t end) {
    const std::size_t b0 = cps[begin].byte_offset;
    const std::size_t b1 = cps[end - 1].byte_offset + cps[end - 1].byte_length;
    tokens.push_back({std::string(text.substr(b0, b1 - b0)), begin, end});
  };
  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i].value;
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_punct(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < n) {
      const char32_t w = cps[i].value;
      if (is_word(w)) {
        ++i;
      } else if ((w == '-' || w == '\'') && i + 1 < n && is_word(cps[i + 1].value)) {
        ++i;
      } else {
        break;
      }
    }
    emit(start, i);
  }
  return tokens;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string utf8_substr(std::string_view text, std::size_t start, std::size_t end) {
  const auto cps = decode_utf8(text);
  if (start > end || end > cps.size()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus", "code-point range out of bounds");
  }
  if (start == end) return {};
  const std::size_t b0 = cps[start].byte_offset;
  const std::size_t b1 = cps[end - 1].byte_offset + cps[end - 1].byte_length;
  return std::string(text.substr(b0, b1 - b0));
}

void validate_document(Document& doc) {
  if (doc.id.empty()) throw validation_error("document with empty id");
  const std::size_t length = utf8_length(doc.text);
  for (auto& span : doc.spans) {
    if (span.start >= span.end || span.end > length) {
      throw validation_error("document '" + doc.id + "': span [" + std::to_string(span.start) +
                             ", " + std::to_string(span.end) +
                             ") out of range for text of length " + std::to_string(length));
    }
    span.surface = utf8_substr(doc.text, span.start, span.end);
    if (span.confidence && !std::isfinite(*span.confidence)) {
      throw validation_error("document '" + doc.id + "': non-finite span confidence");
    }
  }
}

Document parse_document(std::string_view json_line) {
  const auto j = nlohmann::json::parse(json_line);
  if (!j.is_object()) throw Error(ErrorCode::kParse, "load_corpus", "record is not an object");
  Document doc;
  doc.id = j.at("id").get<std::string>();
  doc.title = j.value("title", std::string());
  doc.text = j.at("text").get<std::string>();
  if (j.contains("source")) doc.source = parse_source(j.at("source").get<std::string>());
  if (j.contains("spans")) {
    for (const auto& s : j.at("spans")) {
      Span span;
      span.start = s.at("start").get<std::size_t>();
      span.end = s.at("end").get<std::size_t>();
      span.label = parse_label(s.at("label").get<std::string>());
      if (s.contains("confidence")) span.confidence = s.at("confidence").get<double>();
      doc.spans.push_back(std::move(span));
    }
  }
  validate_document(doc);
  return doc;
}

std::string serialize_document(const Document& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["text"] = doc.text;
  auto spans = ordered_json::array();
  for (const auto& span : doc.spans) {
    ordered_json s;
    s["start"] = span.start;
    s["end"] = span.end;
    s["label"] = label_name(span.label);
    if (span.confidence) s["confidence"] = *span.confidence;
    spans.push_back(std::move(s));
  }
  j["spans"] = std::move(spans);
  j["source"] = source_name(doc.source);
  return j.dump();
}

Corpus read_corpus(std::istream& in, const std::string& origin) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(parse_document(line));
    } catch (const Error& e) {
      throw Error(e.code(), "load_corpus",
                  origin + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "load_corpus",
                  origin + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
    }
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "load_corpus", "cannot open corpus file '" + path + "'");
  return read_corpus(in, path);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents()) out << serialize_document(doc) << '\n';
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "save_corpus", "cannot write '" + path + "'");
  write_corpus(corpus, out);
}

}  // namespace facetgraph
