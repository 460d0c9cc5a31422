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

#include "facetgraph/bundle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "facetgraph/digest.hpp"
#include "facetgraph/error.hpp"

namespace facetgraph {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSettingKeys[] = {
    "corpus",      "vectors",   "span_vectors",  "dim",               "normalize_words",
    "seed",        "purpose_seed", "mechanism_seed", "k",             "purpose_k",
    "mechanism_k", "k_grid",    "restarts",      "max_iters",         "tol",
    "silhouette_sample", "title_count", "selection", "min_support",   "min_confidence",
    "tau"};

const char* const kArtifacts[] = {"corpus.jsonl",           "vectors.txt",
                                  "span_vectors.jsonl",     "index.jsonl",
                                  "concepts_purpose.jsonl", "concepts_mechanism.jsonl",
                                  "rules.jsonl",            "graph.jsonl",
                                  "graph.dot"};

[[noreturn]] void bad_setting(const std::string& key, const std::string& value,
                              const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument, "config",
              "setting '" + key + "' = '" + value + "': " + why);
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_setting(key, value, "expected a non-negative integer");
  return out;
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_setting(key, value, "expected a number");
    return v;
  } catch (const std::logic_error&) {
    bad_setting(key, value, "expected a number");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  const auto v = ascii_lower(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad_setting(key, value, "expected a boolean");
}

std::optional<std::size_t> to_k(const std::string& key, const std::string& value) {
  if (ascii_lower(value) == "auto") return std::nullopt;
  const auto k = to_unsigned(key, value);
  if (k == 0) bad_setting(key, value, "k must be positive");
  return static_cast<std::size_t>(k);
}

std::vector<std::size_t> to_grid(const std::string& key, const std::string& value) {
  std::vector<std::size_t> grid;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    // "a:b:step" expands to a range.
    if (item.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream rs(item);
      std::string p;
      while (std::getline(rs, p, ':')) parts.push_back(p);
      if (parts.size() != 3) bad_setting(key, value, "range must be start:stop:step");
      const auto a = to_unsigned(key, parts[0]);
      const auto b = to_unsigned(key, parts[1]);
      const auto step = to_unsigned(key, parts[2]);
      if (step == 0) bad_setting(key, value, "range step must be positive");
      for (auto x = a; x <= b; x += step) grid.push_back(static_cast<std::size_t>(x));
    } else {
      grid.push_back(static_cast<std::size_t>(to_unsigned(key, item)));
    }
  }
  if (grid.empty()) bad_setting(key, value, "empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) bad_setting(key, value, "grid must be ascending");
  return grid;
}

std::string setting_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ",";
      out += setting_text(e);
    }
    return out;
  }
  if (v.is_null()) return "auto";
  return v.dump();
}

std::string read_file(const fs::path& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, stage, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "write", "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write", "short write to '" + path.string() + "'");
}

Json header(const std::string& build_id) {
  Json h;
  h["build_id"] = build_id;
  return h;
}

class JsonlWriter {
 public:
  void add(const Json& record) {
    text_ += record.dump();
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Records of a bundle file after its header line; checks the build id.
std::vector<Json> read_records(const fs::path& path, const std::string& build_id,
                               Json* header_out = nullptr) {
  const auto text = read_file(path, "load_bundle");
  std::istringstream in(text);
  std::string line;
  std::vector<Json> records;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "load_bundle",
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_header) {
      if (!j.contains("build_id") || j.at("build_id") != build_id) {
        throw Error(ErrorCode::kIntegrity, "load_bundle",
                    path.filename().string() + " belongs to a different build");
      }
      if (header_out) *header_out = j;
      have_header = true;
      continue;
    }
    records.push_back(std::move(j));
  }
  if (!have_header) {
    throw Error(ErrorCode::kIntegrity, "load_bundle", path.filename().string() + " has no header");
  }
  return records;
}

Json concept_set_header(const ConceptSet& set, const std::string& build_id) {
  Json h = header(build_id);
  h["kind"] = label_name(set.kind);
  h["chosen_k"] = set.chosen_k;
  h["auto_k"] = set.auto_k;
  h["trace"] = trace_to_json(set.trace);
  h["warnings"] = set.warnings;
  h["unclustered_span_ids"] = set.unclustered_span_ids;
  return h;
}

Json clustering_summary(const ConceptSet& set) {
  Json j;
  j["chosen_k"] = set.chosen_k;
  j["auto_k"] = set.auto_k;
  j["concepts"] = set.concepts.size();
  j["trace"] = trace_to_json(set.trace);
  j["warnings"] = set.warnings;
  j["unclustered_spans"] = set.unclustered_span_ids.size();
  return j;
}

ConceptSet concept_set_from(const fs::path& path, const std::string& build_id,
                            const Corpus& corpus) {
  Json h;
  const auto records = read_records(path, build_id, &h);
  try {
    ConceptSet set;
    set.kind = parse_label(h.at("kind").get<std::string>());
    set.chosen_k = h.at("chosen_k").get<std::size_t>();
    set.auto_k = h.at("auto_k").get<bool>();
    for (const auto& p : h.at("trace")) {
      set.trace.push_back({p.at("k").get<std::size_t>(), p.at("silhouette").get<double>()});
    }
    set.warnings = h.at("warnings").get<std::vector<std::string>>();
    set.unclustered_span_ids = h.at("unclustered_span_ids").get<std::vector<std::string>>();
    for (const auto& r : records) {
      set.concepts.push_back(concept_from_json(r, corpus));
      if (set.concepts.back().kind != set.kind) {
        throw Error(ErrorCode::kIntegrity, "load_bundle",
                    "concept " + set.concepts.back().id + " has the wrong kind");
      }
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "load_bundle", path.filename().string() + ": " + e.what());
  }
}

std::optional<long long> source_date_epoch() {
  const char* v = std::getenv("SOURCE_DATE_EPOCH");
  if (v == nullptr || *v == '\0') return std::nullopt;
  long long out = 0;
  const std::string s(v);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kInternal, stage, e.what());
  }
}

void check_replaceable(const fs::path& out) {
  if (!fs::exists(out)) return;
  if (!fs::is_directory(out)) {
    throw Error(ErrorCode::kIo, "write", "'" + out.string() + "' exists and is not a directory");
  }
  if (fs::is_empty(out) || fs::exists(out / "manifest.json")) return;
  throw Error(ErrorCode::kIo, "write",
              "'" + out.string() + "' is neither empty nor a bundle; refusing to overwrite");
}

}  // namespace

void apply_setting(BuildConfig& c, const std::string& key, const std::string& value) {
  auto both = [&](auto&& f) {
    f(c.purpose_clustering);
    f(c.mechanism_clustering);
  };
  if (key == "corpus") {
    c.corpus_path = value;
  } else if (key == "vectors") {
    c.vectors_path = value;
  } else if (key == "span_vectors") {
    c.span_vectors_path = value;
  } else if (key == "dim") {
    c.dim = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "normalize_words") {
    c.embed.normalize_words = to_bool(key, value);
  } else if (key == "seed") {
    const auto s = to_unsigned(key, value);
    both([&](ClusteringConfig& cc) { cc.seed = s; });
  } else if (key == "purpose_seed") {
    c.purpose_clustering.seed = to_unsigned(key, value);
  } else if (key == "mechanism_seed") {
    c.mechanism_clustering.seed = to_unsigned(key, value);
  } else if (key == "k") {
    const auto k = to_k(key, value);
    both([&](ClusteringConfig& cc) { cc.k = k; });
  } else if (key == "purpose_k") {
    c.purpose_clustering.k = to_k(key, value);
  } else if (key == "mechanism_k") {
    c.mechanism_clustering.k = to_k(key, value);
  } else if (key == "k_grid") {
    const auto g = to_grid(key, value);
    both([&](ClusteringConfig& cc) { cc.k_grid = g; });
  } else if (key == "restarts") {
    const auto r = to_unsigned(key, value);
    if (r == 0) bad_setting(key, value, "must be positive");
    both([&](ClusteringConfig& cc) { cc.restarts = r; });
  } else if (key == "max_iters") {
    const auto m = to_unsigned(key, value);
    if (m == 0) bad_setting(key, value, "must be positive");
    both([&](ClusteringConfig& cc) { cc.max_iters = m; });
  } else if (key == "tol") {
    const auto t = to_real(key, value);
    if (!(t > 0.0)) bad_setting(key, value, "must be positive");
    both([&](ClusteringConfig& cc) { cc.tol = t; });
  } else if (key == "silhouette_sample") {
    const auto s = to_unsigned(key, value);
    both([&](ClusteringConfig& cc) { cc.silhouette_sample = s; });
  } else if (key == "title_count") {
    const auto t = to_unsigned(key, value);
    both([&](ClusteringConfig& cc) { cc.title_count = t; });
  } else if (key == "selection") {
    KSelection sel;
    if (value == "knee") {
      sel = KSelection::kKnee;
    } else if (value == "argmax") {
      sel = KSelection::kArgmax;
    } else {
      bad_setting(key, value, "expected knee or argmax");
    }
    both([&](ClusteringConfig& cc) { cc.selection = sel; });
  } else if (key == "min_support") {
    const auto s = to_unsigned(key, value);
    if (s == 0) bad_setting(key, value, "must be >= 1");
    c.mining.min_support_count = s;
  } else if (key == "min_confidence") {
    const auto v = to_real(key, value);
    if (!(v > 0.0 && v <= 1.0)) bad_setting(key, value, "must lie in (0, 1]");
    c.mining.min_confidence = v;
  } else if (key == "tau") {
    const auto v = to_real(key, value);
    if (!(v > 0.0 && v <= 1.0)) bad_setting(key, value, "must lie in (0, 1]");
    c.tau = v;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "config", "unknown setting '" + key + "'");
  }
}

BuildConfig resolve_build_config(const std::optional<std::string>& config_file,
                                 const std::map<std::string, std::string>& overrides) {
  BuildConfig config;
  if (config_file) {
    const auto j = parse_json(read_file(*config_file, "config"), "config");
    if (!j.is_object()) {
      throw Error(ErrorCode::kParse, "config", *config_file + ": expected an object");
    }
    const fs::path base = fs::path(*config_file).parent_path();
    for (const auto& [key, value] : j.items()) {
      std::string text = setting_text(value);
      const bool is_path = key == "corpus" || key == "vectors" || key == "span_vectors";
      if (is_path && !text.empty() && fs::path(text).is_relative()) {
        text = (base / text).lexically_normal().string();
      }
      apply_setting(config, key, text);
    }
  }
  for (const char* key : kSettingKeys) {
    std::string env = "FFS_";
    for (const char* p = key; *p; ++p) env += static_cast<char>(std::toupper(*p));
    if (const char* v = std::getenv(env.c_str()); v != nullptr) apply_setting(config, key, v);
  }
  for (const auto& [key, value] : overrides) apply_setting(config, key, value);
  return config;
}

Json config_to_json(const BuildConfig& c) {
  auto clustering = [](const ClusteringConfig& cc) {
    Json j;
    j["k"] = cc.k ? Json(*cc.k) : Json("auto");
    j["k_grid"] = cc.k_grid;
    j["seed"] = cc.seed;
    j["max_iters"] = cc.max_iters;
    j["tol"] = cc.tol;
    j["silhouette_sample"] = cc.silhouette_sample;
    j["restarts"] = cc.restarts;
    j["title_count"] = cc.title_count;
    j["selection"] = cc.selection == KSelection::kKnee ? "knee" : "argmax";
    return j;
  };
  Json j;
  j["corpus"] = c.corpus_path;
  j["vectors"] = c.vectors_path;
  j["span_vectors"] = c.span_vectors_path.empty() ? Json(nullptr) : Json(c.span_vectors_path);
  j["dim"] = c.dim;
  j["normalize_words"] = c.embed.normalize_words;
  j["purpose_clustering"] = clustering(c.purpose_clustering);
  j["mechanism_clustering"] = clustering(c.mechanism_clustering);
  j["min_support"] = c.mining.min_support_count;
  j["min_confidence"] = c.mining.min_confidence;
  j["tau"] = c.tau;
  return j;
}

BuildReport build_index(const BuildConfig& config, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.corpus_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "config", "no corpus path given");
  }
  if (config.vectors_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "config", "no vectors path given");
  }
  const fs::path out(out_dir);
  check_replaceable(out);

  const Corpus corpus = run_stage("load_corpus", [&] { return load_corpus(config.corpus_path); });
  VectorLoadReport vector_report;
  const WordVectorTable table = run_stage(
      "load_vectors", [&] { return load_vectors(config.vectors_path, config.dim, &vector_report); });

  PrecomputedLoadReport pre_report;
  std::unordered_map<std::string, SpanVector> precomputed;
  if (!config.span_vectors_path.empty()) {
    precomputed = run_stage("embed", [&] {
      return load_precomputed_span_vectors(config.span_vectors_path, corpus, &pre_report);
    });
  }
  const SpanEmbeddings embeddings = run_stage("embed", [&] {
    return embed_corpus(corpus, table, precomputed.empty() ? nullptr : &precomputed, config.embed);
  });
  const ProductIndex index = run_stage("index", [&] { return ProductIndex(corpus, embeddings); });
  const ConceptSet purpose = run_stage("cluster", [&] {
    return build_concepts(corpus, embeddings, SpanLabel::kPurpose, config.purpose_clustering);
  });
  const ConceptSet mechanism = run_stage("cluster", [&] {
    return build_concepts(corpus, embeddings, SpanLabel::kMechanism, config.mechanism_clustering);
  });
  ConceptAssignment assignment;
  assignment.add(purpose);
  assignment.add(mechanism);
  const auto transactions = run_stage("mine", [&] { return build_transactions(corpus, assignment); });
  const auto rules = run_stage("mine", [&] { return mine_rules(transactions, config.mining); });
  const ConceptGraph graph = run_stage("graph", [&] {
    return build_graph(rules, transactions, graph_nodes(purpose, mechanism), config.tau);
  });

  // Serialized artifacts, keyed by file name.
  std::map<std::string, std::string> files;
  std::ostringstream corpus_text;
  write_corpus(corpus, corpus_text);
  files["corpus.jsonl"] = corpus_text.str();

  const std::string vectors_digest = sha256_file(config.vectors_path);
  const std::string span_vectors_digest =
      config.span_vectors_path.empty() ? std::string() : sha256_file(config.span_vectors_path);
  Json config_json = config_to_json(config);
  Json identity = config_json;
  identity.erase("corpus");
  identity.erase("vectors");
  identity.erase("span_vectors");
  const std::string corpus_digest = sha256_hex(files["corpus.jsonl"]);
  const std::string build_id =
      sha256_hex(std::string(kBundleFormatVersion) + "\n" + corpus_digest + "\n" +
                 vectors_digest + "\n" + span_vectors_digest + "\n" + identity.dump())
          .substr(0, 16);

  {
    JsonlWriter w;
    Json h = header(build_id);
    h["dim"] = embeddings.dim();
    w.add(h);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      const auto& doc = corpus.at(d);
      for (std::size_t s = 0; s < doc.spans.size(); ++s) {
        const auto& v = embeddings.at({d, s});
        Json r;
        r["doc_id"] = doc.id;
        r["span_index"] = s;
        r["oov"] = v.oov;
        r["vector"] = v.oov ? Json::array() : Json(v.values);
        w.add(r);
      }
    }
    files["span_vectors.jsonl"] = w.text();
  }
  {
    JsonlWriter w;
    w.add(header(build_id));
    for (const auto& e : index.entries()) {
      Json r;
      r["doc_id"] = e.doc_id;
      r["purpose_spans"] = e.purpose_spans;
      r["mechanism_spans"] = e.mechanism_spans;
      w.add(r);
    }
    files["index.jsonl"] = w.text();
  }
  for (const ConceptSet* set : {&purpose, &mechanism}) {
    JsonlWriter w;
    w.add(concept_set_header(*set, build_id));
    for (const auto& c : set->concepts) w.add(concept_to_json(c));
    files[std::string("concepts_") + label_name(set->kind) + ".jsonl"] = w.text();
  }
  {
    JsonlWriter w;
    w.add(header(build_id));
    for (const auto& r : rules) w.add(rule_to_json(r));
    files["rules.jsonl"] = w.text();
  }
  {
    JsonlWriter w;
    w.add(header(build_id));
    for (const auto& n : graph.nodes()) w.add(node_to_json(n));
    for (const auto& e : graph.edges()) w.add(edge_to_json(e));
    files["graph.jsonl"] = w.text();
  }
  files["graph.dot"] = "// build_id: " + build_id + "\n" + graph.to_dot();

  Json artifacts;
  for (const char* name : kArtifacts) {
    if (std::string(name) == "vectors.txt") {
      artifacts[name] = vectors_digest;
    } else {
      artifacts[name] = sha256_hex(files.at(name));
    }
  }

  Json manifest;
  manifest["format_version"] = kBundleFormatVersion;
  manifest["build_id"] = build_id;
  const auto epoch = source_date_epoch();
  manifest["build_timestamp"] = epoch ? Json(*epoch) : Json(nullptr);
  manifest["config"] = config_json;
  manifest["seeds"] = {{"purpose_clustering", config.purpose_clustering.seed},
                       {"mechanism_clustering", config.mechanism_clustering.seed}};
  manifest["corpus_digest"] = corpus_digest;
  manifest["inputs"] = {{"vectors_sha256", vectors_digest},
                        {"span_vectors_sha256",
                         span_vectors_digest.empty() ? Json(nullptr) : Json(span_vectors_digest)}};
  manifest["load_report"] = {{"vectors_loaded", vector_report.loaded},
                             {"vectors_skipped", vector_report.skipped},
                             {"precomputed_loaded", pre_report.loaded},
                             {"precomputed_unknown", pre_report.unknown}};
  manifest["stats"] = stats_to_json(corpus.stats());
  manifest["clustering"] = {{"purpose", clustering_summary(purpose)},
                            {"mechanism", clustering_summary(mechanism)}};
  manifest["rules"] = rules.size();
  manifest["edges"] = graph.edges().size();
  manifest["artifacts"] = artifacts;

  fs::path staging = out;
  staging += ".partial";
  try {
    run_stage("write", [&] {
      fs::remove_all(staging);
      fs::create_directories(staging);
      for (const auto& [name, content] : files) write_file(staging / name, content);
      fs::copy_file(config.vectors_path, staging / "vectors.txt",
                    fs::copy_options::overwrite_existing);
      if (sha256_file((staging / "vectors.txt").string()) != vectors_digest) {
        throw Error(ErrorCode::kIo, "write", "vectors file changed during the build");
      }
      write_file(staging / "manifest.json", manifest.dump(2) + "\n");
      if (fs::exists(out)) fs::remove_all(out);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      fs::rename(staging, out);
      return 0;
    });
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }

  BuildReport report;
  report.build_id = build_id;
  report.directory = out.string();
  report.manifest = std::move(manifest);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::shared_ptr<const Bundle> load_bundle(const std::string& dir) {
  const fs::path root(dir);
  auto bundle = std::make_shared<Bundle>();
  bundle->directory = dir;
  bundle->manifest = parse_json(read_file(root / "manifest.json", "load_bundle"), "load_bundle");
  const auto& m = bundle->manifest;
  try {
    if (m.at("format_version") != kBundleFormatVersion) {
      throw Error(ErrorCode::kIntegrity, "load_bundle", "unsupported bundle format");
    }
    bundle->build_id = m.at("build_id").get<std::string>();
    const auto& artifacts = m.at("artifacts");
    for (const char* name : kArtifacts) {
      const fs::path p = root / name;
      if (!fs::exists(p)) throw Error(ErrorCode::kIntegrity, "load_bundle", std::string(name) + " is missing");
      if (sha256_file(p.string()) != artifacts.at(name).get<std::string>()) {
        throw Error(ErrorCode::kIntegrity, "load_bundle",
                    std::string(name) + " does not match the manifest digest");
      }
    }
    if (artifacts.at("corpus.jsonl") != m.at("corpus_digest")) {
      throw Error(ErrorCode::kIntegrity, "load_bundle", "corpus digest mismatch");
    }
    const auto dot = read_file(root / "graph.dot", "load_bundle");
    if (dot.rfind("// build_id: " + bundle->build_id + "\n", 0) != 0) {
      throw Error(ErrorCode::kIntegrity, "load_bundle", "graph.dot belongs to a different build");
    }

    bundle->corpus = load_corpus((root / "corpus.jsonl").string());
    const auto& cfg = m.at("config");
    bundle->embed_options.normalize_words = cfg.at("normalize_words").get<bool>();
    bundle->table = load_vectors((root / "vectors.txt").string(), cfg.at("dim").get<std::size_t>());

    const auto& corpus = bundle->corpus;
    Json vh;
    const auto span_records = read_records(root / "span_vectors.jsonl", bundle->build_id, &vh);
    const std::size_t dim = vh.at("dim").get<std::size_t>();
    std::vector<std::vector<SpanVector>> vectors(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) vectors[d].resize(corpus.at(d).spans.size());
    std::size_t seen = 0;
    for (const auto& r : span_records) {
      const auto doc = corpus.index_of(r.at("doc_id").get<std::string>());
      const auto s = r.at("span_index").get<std::size_t>();
      if (!doc || s >= corpus.at(*doc).spans.size()) {
        throw Error(ErrorCode::kIntegrity, "load_bundle", "span vector for unknown span");
      }
      SpanVector v;
      v.oov = r.at("oov").get<bool>();
      v.values = v.oov ? Vec(dim, 0.0) : r.at("vector").get<Vec>();
      if (v.values.size() != dim) {
        throw Error(ErrorCode::kIntegrity, "load_bundle", "span vector has the wrong dimension");
      }
      vectors[*doc][s] = std::move(v);
      ++seen;
    }
    std::size_t expected = 0;
    for (const auto& doc : corpus.documents()) expected += doc.spans.size();
    if (seen != expected) {
      throw Error(ErrorCode::kIntegrity, "load_bundle", "span vectors do not cover the corpus");
    }
    bundle->embeddings = SpanEmbeddings(dim, std::move(vectors));

    std::vector<ProductIndexEntry> entries;
    for (const auto& r : read_records(root / "index.jsonl", bundle->build_id)) {
      ProductIndexEntry e;
      e.doc_id = r.at("doc_id").get<std::string>();
      const auto doc = corpus.index_of(e.doc_id);
      if (!doc) throw Error(ErrorCode::kIntegrity, "load_bundle", "index entry for unknown document");
      e.purpose_spans = r.at("purpose_spans").get<std::vector<std::size_t>>();
      e.mechanism_spans = r.at("mechanism_spans").get<std::vector<std::size_t>>();
      for (auto s : e.purpose_spans) e.purpose_vectors.push_back(bundle->embeddings.at({*doc, s}));
      for (auto s : e.mechanism_spans) {
        e.mechanism_vectors.push_back(bundle->embeddings.at({*doc, s}));
      }
      entries.push_back(std::move(e));
    }
    bundle->index = ProductIndex(std::move(entries));

    bundle->purpose =
        concept_set_from(root / "concepts_purpose.jsonl", bundle->build_id, corpus);
    bundle->mechanism =
        concept_set_from(root / "concepts_mechanism.jsonl", bundle->build_id, corpus);

    for (const auto& r : read_records(root / "rules.jsonl", bundle->build_id)) {
      bundle->rules.push_back(rule_from_json(r));
    }
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    for (const auto& r : read_records(root / "graph.jsonl", bundle->build_id)) {
      const auto type = r.at("type").get<std::string>();
      if (type == "node") {
        nodes.push_back(node_from_json(r));
      } else if (type == "edge") {
        edges.push_back(edge_from_json(r));
      } else {
        throw Error(ErrorCode::kParse, "load_bundle", "unknown graph record type '" + type + "'");
      }
    }
    bundle->graph = ConceptGraph(std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "load_bundle", std::string("malformed bundle: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::kIntegrity, "load_bundle", std::string("inconsistent bundle: ") + e.what());
  }
  return bundle;
}

}  // namespace facetgraph
