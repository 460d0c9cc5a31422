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

#include "facetgraph/extraction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "facetgraph/embedding.hpp"
#include "facetgraph/error.hpp"

namespace facetgraph {
namespace {

constexpr std::size_t kMaxRun = 6;
constexpr std::size_t kMaxLeadingStopwords = 2;

struct Cue {
  std::vector<std::string_view> words;
  SpanLabel label;
};

const std::vector<Cue>& cues() {
  static const std::vector<Cue> list = {
      {{"so", "that"}, SpanLabel::kPurpose},  {{"made", "of"}, SpanLabel::kMechanism},
      {{"for"}, SpanLabel::kPurpose},         {{"to"}, SpanLabel::kPurpose},
      {{"helps"}, SpanLabel::kPurpose},       {{"allows"}, SpanLabel::kPurpose},
      {{"using"}, SpanLabel::kMechanism},     {{"with"}, SpanLabel::kMechanism},
      {{"via"}, SpanLabel::kMechanism},       {{"by"}, SpanLabel::kMechanism},
  };
  return list;
}

// Length of the cue starting at token i, 0 if none.
std::size_t match_cue(const std::vector<std::string>& lower, std::size_t i, SpanLabel* label) {
  for (const auto& cue : cues()) {
    if (i + cue.words.size() > lower.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < cue.words.size(); ++k) {
      if (lower[i + k] != cue.words[k]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      *label = cue.label;
      return cue.words.size();
    }
  }
  return 0;
}

std::vector<std::optional<SpanLabel>> token_classes(const TokenLabelSequence& seq) {
  std::vector<std::optional<SpanLabel>> out;
  out.reserve(seq.labels.size());
  for (auto tag : seq.labels) out.push_back(iob_label(tag));
  return out;
}

}  // namespace

const char* iob_name(IobTag tag) {
  switch (tag) {
    case IobTag::kOutside: return "O";
    case IobTag::kBeginPurpose: return "B-P";
    case IobTag::kInsidePurpose: return "I-P";
    case IobTag::kBeginMechanism: return "B-M";
    case IobTag::kInsideMechanism: return "I-M";
  }
  return "O";
}

IobTag parse_iob(std::string_view name) {
  if (name == "O") return IobTag::kOutside;
  if (name == "B-P") return IobTag::kBeginPurpose;
  if (name == "I-P") return IobTag::kInsidePurpose;
  if (name == "B-M") return IobTag::kBeginMechanism;
  if (name == "I-M") return IobTag::kInsideMechanism;
  throw Error(ErrorCode::kParse, "iob", "unknown IOB tag '" + std::string(name) + "'");
}

std::optional<SpanLabel> iob_label(IobTag tag) {
  switch (tag) {
    case IobTag::kBeginPurpose:
    case IobTag::kInsidePurpose: return SpanLabel::kPurpose;
    case IobTag::kBeginMechanism:
    case IobTag::kInsideMechanism: return SpanLabel::kMechanism;
    case IobTag::kOutside: break;
  }
  return std::nullopt;
}

TokenLabelSequence spans_to_iob(const Document& doc) {
  TokenLabelSequence seq;
  seq.tokens = tokenize(doc.text);
  seq.labels.assign(seq.tokens.size(), IobTag::kOutside);

  // Spans ranked by precedence: purpose first, then earlier start.
  std::vector<std::size_t> order(doc.spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = doc.spans[a];
    const auto& sb = doc.spans[b];
    const int la = sa.label == SpanLabel::kPurpose ? 0 : 1;
    const int lb = sb.label == SpanLabel::kPurpose ? 0 : 1;
    return std::tie(la, sa.start) < std::tie(lb, sb.start);
  });

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t previous_owner = kNone;
  for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
    std::size_t owner = kNone;
    for (std::size_t idx : order) {
      if (token_in_span(seq.tokens[t], doc.spans[idx])) {
        owner = idx;
        break;
      }
    }
    if (owner != kNone) {
      const bool purpose = doc.spans[owner].label == SpanLabel::kPurpose;
      const bool begin = owner != previous_owner;
      seq.labels[t] = purpose ? (begin ? IobTag::kBeginPurpose : IobTag::kInsidePurpose)
                              : (begin ? IobTag::kBeginMechanism : IobTag::kInsideMechanism);
    }
    previous_owner = owner;
  }
  return seq;
}

std::vector<Span> iob_to_spans(const TokenLabelSequence& sequence, std::string_view text,
                               std::size_t* repairs) {
  if (sequence.tokens.size() != sequence.labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "iob", "token and label sequences differ in length");
  }
  std::vector<Span> spans;
  std::size_t repaired = 0;
  std::optional<Span> open;
  auto close = [&] {
    if (open) {
      open->surface = utf8_substr(text, open->start, open->end);
      spans.push_back(*open);
      open.reset();
    }
  };
  for (std::size_t t = 0; t < sequence.labels.size(); ++t) {
    const IobTag tag = sequence.labels[t];
    const auto& token = sequence.tokens[t];
    const auto label = iob_label(tag);
    if (!label) {
      close();
      continue;
    }
    const bool inside = tag == IobTag::kInsidePurpose || tag == IobTag::kInsideMechanism;
    if (inside && open && open->label == *label) {
      open->end = token.end;
      continue;
    }
    if (inside) ++repaired;
    close();
    open = Span{*label, token.start, token.end, {}, std::nullopt};
  }
  close();
  if (repairs) *repairs = repaired;
  return spans;
}

std::vector<ScoredPrediction> heuristic_extract(std::string_view text) {
  const auto tokens = tokenize(text);
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(ascii_lower(t.surface));

  std::vector<ScoredPrediction> out;
  std::set<std::tuple<int, std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    SpanLabel label{};
    const std::size_t cue_len = match_cue(lower, i, &label);
    if (cue_len == 0) continue;
    std::size_t j = i + cue_len;
    SpanLabel ignored{};
    std::size_t skipped = 0;
    while (j < tokens.size() && skipped < kMaxLeadingStopwords && is_stopword(lower[j]) &&
           lower[j].find_first_not_of("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") != std::string::npos &&
           match_cue(lower, j, &ignored) == 0) {
      ++j;
      ++skipped;
    }
    const std::size_t run_start = j;
    while (j < tokens.size() && j - run_start < kMaxRun && !is_stopword(lower[j]) &&
           match_cue(lower, j, &ignored) == 0) {
      ++j;
    }
    const std::size_t run = j - run_start;
    if (run == 0) continue;
    const std::size_t start = tokens[run_start].start;
    const std::size_t end = tokens[j - 1].end;
    if (!seen.emplace(static_cast<int>(label), start, end).second) continue;
    ScoredPrediction p;
    p.span = Span{label, start, end, utf8_substr(text, start, end), std::nullopt};
    p.confidence = 0.5 + 0.1 * static_cast<double>(std::min<std::size_t>(run, 5)) / 5.0;
    p.span.confidence = p.confidence;
    out.push_back(std::move(p));
  }
  return out;
}

Corpus heuristic_extract_corpus(const Corpus& corpus) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    Document d = doc;
    d.spans.clear();
    d.source = SourceTag::kHeuristic;
    for (auto& p : heuristic_extract(doc.text)) d.spans.push_back(std::move(p.span));
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

ClassScore make_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScore s;
  s.true_positive = tp;
  s.false_positive = fp;
  s.false_negative = fn;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0.0 ? 0.0
                                       : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

ExtractionReport score_extraction(const Corpus& predicted, const Corpus& gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::kValidation, "score_extraction",
                "predicted corpus has " + std::to_string(predicted.size()) +
                    " documents, gold has " + std::to_string(gold.size()));
  }
  std::array<std::size_t, 2> tp{}, fp{}, fn{};
  std::size_t span_tp = 0, span_fp = 0, span_fn = 0;
  ExtractionReport report;
  for (const auto& g : gold.documents()) {
    const Document* p = predicted.find(g.id);
    if (p == nullptr) {
      throw Error(ErrorCode::kValidation, "score_extraction",
                  "document '" + g.id + "' missing from predictions");
    }
    if (p->text != g.text) {
      throw Error(ErrorCode::kValidation, "score_extraction",
                  "document '" + g.id + "' text differs between predictions and gold");
    }
    const auto gseq = spans_to_iob(g);
    const auto pseq = spans_to_iob(*p);
    const auto gc = token_classes(gseq);
    const auto pc = token_classes(pseq);
    report.tokens += gc.size();
    for (std::size_t t = 0; t < gc.size(); ++t) {
      for (int c = 0; c < 2; ++c) {
        const auto label = c == 0 ? SpanLabel::kPurpose : SpanLabel::kMechanism;
        const bool in_gold = gc[t] && *gc[t] == label;
        const bool in_pred = pc[t] && *pc[t] == label;
        if (in_gold && in_pred) ++tp[c];
        if (!in_gold && in_pred) ++fp[c];
        if (in_gold && !in_pred) ++fn[c];
      }
    }
    using Key = std::tuple<int, std::size_t, std::size_t>;
    std::multiset<Key> gold_spans;
    for (const auto& s : iob_to_spans(gseq, g.text)) {
      gold_spans.emplace(static_cast<int>(s.label), s.start, s.end);
    }
    for (const auto& s : iob_to_spans(pseq, p->text)) {
      auto it = gold_spans.find(Key(static_cast<int>(s.label), s.start, s.end));
      if (it != gold_spans.end()) {
        ++span_tp;
        gold_spans.erase(it);
      } else {
        ++span_fp;
      }
    }
    span_fn += gold_spans.size();
    ++report.documents;
  }
  report.purpose = make_score(tp[0], fp[0], fn[0]);
  report.mechanism = make_score(tp[1], fp[1], fn[1]);
  report.micro = make_score(tp[0] + tp[1], fp[0] + fp[1], fn[0] + fn[1]);
  report.span_exact = make_score(span_tp, span_fp, span_fn);
  return report;
}

std::vector<RankedPrediction> collect_predictions(const Corpus& predicted) {
  std::vector<RankedPrediction> out;
  for (const auto& doc : predicted.documents()) {
    for (const auto& span : doc.spans) {
      out.push_back({doc.id, span, span.confidence.value_or(1.0)});
    }
  }
  return out;
}

PrecisionAtK precision_at_k(const std::vector<RankedPrediction>& predictions, const Corpus& gold,
                            std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "precision_at_k", "k must be >= 1");
  // Ties keep input (document) order.
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  PrecisionAtK result;
  result.effective_k = std::min(k, predictions.size());
  if (result.effective_k == 0) return result;

  std::map<std::string, std::vector<Token>> token_cache;
  auto tokens_of = [&](const Document& doc) -> const std::vector<Token>& {
    auto it = token_cache.find(doc.id);
    if (it == token_cache.end()) it = token_cache.emplace(doc.id, tokenize(doc.text)).first;
    return it->second;
  };
  auto token_set = [](const std::vector<Token>& tokens, const Span& span) {
    std::vector<std::size_t> ids;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (token_in_span(tokens[t], span)) ids.push_back(t);
    }
    return ids;
  };

  std::size_t correct = 0;
  for (std::size_t r = 0; r < result.effective_k; ++r) {
    const auto& pred = predictions[order[r]];
    const Document* doc = gold.find(pred.doc_id);
    if (doc == nullptr) continue;
    const auto& tokens = tokens_of(*doc);
    const auto pset = token_set(tokens, pred.span);
    if (pset.empty()) continue;
    for (const auto& g : doc->spans) {
      if (g.label != pred.span.label) continue;
      const auto gset = token_set(tokens, g);
      std::vector<std::size_t> inter;
      std::set_intersection(pset.begin(), pset.end(), gset.begin(), gset.end(),
                            std::back_inserter(inter));
      const std::size_t uni = pset.size() + gset.size() - inter.size();
      if (uni > 0 && 2 * inter.size() >= uni) {
        ++correct;
        break;
      }
    }
  }
  result.value = static_cast<double>(correct) / static_cast<double>(result.effective_k);
  return result;
}

}  // namespace facetgraph
