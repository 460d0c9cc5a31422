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

#include <chrono>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "facetgraph/facetgraph.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct CliFailure {
  fg_status status;
};

// Takes ownership of a library string and parses it.
Json take_json(char* text) {
  Json j = Json::parse(text);
  fg_string_free(text);
  return j;
}

void check(fg_status status) {
  if (status == FG_OK) return;
  std::cerr << "error [" << fg_last_error_stage() << "] " << fg_status_name(status) << ": "
            << fg_last_error() << "\n";
  throw CliFailure{status};
}

class BundleHandle {
 public:
  explicit BundleHandle(const std::string& dir, const Json& options = Json::object()) {
    check(fg_bundle_open(dir.c_str(), options.dump().c_str(), &handle_));
  }
  ~BundleHandle() { fg_bundle_close(handle_); }
  BundleHandle(const BundleHandle&) = delete;
  BundleHandle& operator=(const BundleHandle&) = delete;
  fg_bundle* get() const { return handle_; }

 private:
  fg_bundle* handle_ = nullptr;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string number_or_dash(const Json& v, int digits = 4) {
  return v.is_number() ? fixed(v.get<double>(), digits) : std::string("-");
}

std::string join(const Json& list, const char* sep = "; ") {
  std::string out;
  for (const auto& e : list) {
    if (!out.empty()) out += sep;
    out += e.is_string() ? e.get<std::string>() : e.dump();
  }
  return out;
}

struct Options {
  std::string format = "text";
  bool records() const { return format == "records"; }
};

// ---------------------------------------------------------------- verbs

void print_stats(const Json& stats) {
  std::cout << "documents        " << stats.at("documents") << "\n"
            << "purpose spans    " << stats.at("purpose_spans") << "\n"
            << "mechanism spans  " << stats.at("mechanism_spans") << "\n"
            << "tokens           " << stats.at("tokens") << "\n"
            << "purpose share    " << fixed(100.0 * stats.at("purpose_share").get<double>(), 1)
            << "%\n"
            << "mechanism share  " << fixed(100.0 * stats.at("mechanism_share").get<double>(), 1)
            << "%\n"
            << "other share      " << fixed(100.0 * stats.at("other_share").get<double>(), 1)
            << "%\n";
}

void run_ingest(const Options& o, const std::string& input, const std::string& output,
                const std::string& extract) {
  Json req = {{"input", input}, {"extract", extract}};
  if (!output.empty()) req["output"] = output;
  char* out = nullptr;
  check(fg_ingest(req.dump().c_str(), &out));
  const Json res = take_json(out);
  if (o.records()) {
    std::cout << res.dump() << "\n";
    return;
  }
  print_stats(res.at("stats"));
  if (!output.empty()) std::cout << "wrote " << output << "\n";
}

void run_build(const Options& o, const std::map<std::string, std::string>& settings,
               const std::string& config_file, const std::string& out_dir) {
  Json s = Json::object();
  for (const auto& [k, v] : settings) s[k] = v;
  char* out = nullptr;
  check(fg_build_index(s.dump().c_str(), config_file.empty() ? nullptr : config_file.c_str(),
                       out_dir.c_str(), &out));
  const Json m = take_json(out);
  if (o.records()) {
    std::cout << m.dump() << "\n";
    return;
  }
  std::cout << "bundle              " << out_dir << "\n"
            << "build id            " << m.at("build_id").get<std::string>() << "\n"
            << "documents           " << m.at("stats").at("documents") << "\n";
  for (const char* kind : {"purpose", "mechanism"}) {
    const auto& c = m.at("clustering").at(kind);
    std::cout << kind << " concepts" << (std::string(kind) == "purpose" ? "    " : "  ")
              << c.at("concepts") << " (k=" << c.at("chosen_k")
              << (c.at("auto_k").get<bool>() ? ", auto" : "") << ")\n";
    for (const auto& w : c.at("warnings")) {
      std::cout << "  warning: " << w.get<std::string>() << "\n";
    }
  }
  std::cout << "rules               " << m.at("rules") << "\n"
            << "edges               " << m.at("edges") << "\n"
            << "seconds             " << fixed(m.at("build_seconds").get<double>(), 2) << "\n";
}

void run_search(const Options& o, const std::string& bundle_dir, const Json& query) {
  BundleHandle bundle(bundle_dir);
  char* out = nullptr;
  check(fg_search(bundle.get(), query.dump().c_str(), &out));
  const Json res = take_json(out);
  if (o.records()) {
    for (const auto& r : res.at("results")) std::cout << r.dump() << "\n";
    return;
  }
  if (res.at("over_constrained").get<bool>()) {
    std::cout << "over-constrained: the negated facets exclude every product\n";
    return;
  }
  std::printf("%-5s %-28s %-8s %-8s %-8s\n", "rank", "doc_id", "score", "d_purp", "d_mech");
  for (const auto& r : res.at("results")) {
    std::printf("%-5d %-28s %-8s %-8s %-8s\n", r.at("rank").get<int>(),
                r.at("doc_id").get<std::string>().c_str(),
                fixed(r.at("score").get<double>()).c_str(),
                number_or_dash(r.at("purpose_distance")).c_str(),
                number_or_dash(r.at("mechanism_distance")).c_str());
  }
  std::cout << res.at("candidates") << " candidates after negation, build "
            << res.at("build_id").get<std::string>() << "\n";
}

void run_inspire(const Options& o, const std::string& bundle_dir, const Json& request,
                 const std::string& out_path) {
  BundleHandle bundle(bundle_dir);
  char* out = nullptr;
  check(fg_inspire(bundle.get(), request.dump().c_str(), &out));
  Json session = take_json(out);
  session.erase("build_id");
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::app);
    if (!f) {
      std::cerr << "error [inspire] io: cannot write '" << out_path << "'\n";
      throw CliFailure{FG_ERR_IO};
    }
    f << session.dump() << "\n";
  }
  if (o.records()) {
    std::cout << session.dump() << "\n";
    return;
  }
  std::cout << "session " << session.at("session_id").get<std::string>() << "  seed \""
            << session.at("seed").get<std::string>() << "\" -> "
            << session.at("mapped_concept").get<std::string>()
            << (session.at("graph_fallback").get<bool>() ? "  (graph fallback)" : "") << "\n";
  for (const auto& b : session.at("boxes")) {
    std::cout << "[" << b.at("display_order") << "] " << b.at("condition").get<std::string>();
    if (!b.at("concept_id").is_null()) std::cout << " " << b.at("concept_id").get<std::string>();
    if (b.at("shortfall").get<bool>()) std::cout << " (shortfall)";
    if (b.at("fallback").get<bool>()) std::cout << " (fallback)";
    std::cout << "\n";
    if (b.contains("error")) std::cout << "    error: " << b.at("error").get<std::string>() << "\n";
    for (const auto& s : b.at("spans")) std::cout << "    - " << s.get<std::string>() << "\n";
  }
  if (!out_path.empty()) std::cout << "appended to " << out_path << "\n";
}

void run_neighbors(const Options& o, const std::string& bundle_dir, const std::string& id,
                   const std::string& direction, std::size_t top) {
  BundleHandle bundle(bundle_dir);
  char* out = nullptr;
  check(fg_graph_neighbors(bundle.get(), id.c_str(), direction.c_str(), top, &out));
  const Json res = take_json(out);
  if (o.records()) {
    for (const auto& n : res.at("neighbors")) std::cout << n.dump() << "\n";
    return;
  }
  if (res.at("neighbors").empty()) std::cout << "no neighbors\n";
  for (const auto& n : res.at("neighbors")) {
    std::printf("%-4s %-6s conf %s  support %-3d %-13s %s\n",
                n.at("direction").get<std::string>().c_str(),
                n.at("concept_id").get<std::string>().c_str(),
                fixed(n.at("confidence").get<double>(), 3).c_str(),
                n.at("support_count").get<int>(), n.at("relation").get<std::string>().c_str(),
                join(n.at("title_spans")).c_str());
  }
}

void run_edge(const Options& o, const std::string& bundle_dir, const std::string& from,
              const std::string& to) {
  BundleHandle bundle(bundle_dir);
  char* out = nullptr;
  check(fg_graph_edge(bundle.get(), from.c_str(), to.c_str(), &out));
  const Json e = take_json(out);
  if (o.records()) {
    std::cout << e.dump() << "\n";
    return;
  }
  std::cout << from << " -> " << to << "  " << e.at("relation").get<std::string>() << "  conf "
            << fixed(e.at("weight").get<double>(), 3) << "  support " << e.at("support_count")
            << "\n";
  for (const auto& p : e.at("provenance")) {
    std::cout << "  " << p.at("doc_id").get<std::string>() << "  "
              << p.at("from_span_id").get<std::string>() << " / "
              << p.at("to_span_id").get<std::string>() << "\n";
  }
}

void print_warnings(const Json& report) {
  for (const auto& w : report.value("warnings", Json::array())) {
    std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
}

void run_eval_search(const Options& o, const Json& request) {
  char* out = nullptr;
  check(fg_eval_search(request.dump().c_str(), &out));
  const Json r = take_json(out);
  print_warnings(r);
  if (o.records()) {
    for (auto m : r.at("methods")) {
      m["record"] = "method";
      std::cout << m.dump() << "\n";
    }
    for (auto q : r.at("per_query")) {
      q["record"] = "query";
      std::cout << q.dump() << "\n";
    }
    return;
  }
  std::printf("%-14s %-8s %-8s %s\n", "method", "MAP", "NDCG", "queries");
  for (const auto& m : r.at("methods")) {
    std::printf("%-14s %-8s %-8s %d\n", m.at("method").get<std::string>().c_str(),
                fixed(m.at("map").get<double>()).c_str(), fixed(m.at("ndcg").get<double>()).c_str(),
                m.at("queries_scored").get<int>());
  }
  std::cout << "cutoff " << r.at("cutoff") << "\n";
}

void run_eval_extraction(const Options& o, const Json& request) {
  char* out = nullptr;
  check(fg_eval_extraction(request.dump().c_str(), &out));
  const Json r = take_json(out);
  if (o.records()) {
    for (const char* cls : {"purpose", "mechanism", "micro", "span_exact"}) {
      Json rec = r.at("report").at(cls);
      rec["record"] = "class";
      rec["class"] = cls;
      std::cout << rec.dump() << "\n";
    }
    for (auto p : r.at("precision_at_k")) {
      p["record"] = "precision_at_k";
      std::cout << p.dump() << "\n";
    }
    return;
  }
  std::printf("%-11s %-8s %-8s %-8s\n", "class", "P", "R", "F1");
  for (const char* cls : {"purpose", "mechanism", "micro", "span_exact"}) {
    const auto& c = r.at("report").at(cls);
    std::printf("%-11s %-8s %-8s %-8s\n", cls, fixed(100 * c.at("precision").get<double>(), 2).c_str(),
                fixed(100 * c.at("recall").get<double>(), 2).c_str(),
                fixed(100 * c.at("f1").get<double>(), 2).c_str());
  }
  for (const auto& p : r.at("precision_at_k")) {
    std::cout << "P@" << p.at("k") << " = " << fixed(p.at("precision").get<double>())
              << " (effective k " << p.at("effective_k") << ")\n";
  }
}

void run_eval_inspiration(const Options& o, const Json& request) {
  char* out = nullptr;
  check(fg_eval_inspiration(request.dump().c_str(), &out));
  const Json r = take_json(out);
  print_warnings(r);
  if (o.records()) {
    for (const auto& c : r.at("conditions")) std::cout << c.dump() << "\n";
    return;
  }
  std::printf("%-24s %-12s %-12s\n", "condition", "span agr.", "box agr.");
  for (const auto& c : r.at("conditions")) {
    std::printf("%-24s %-12s %-12s\n", c.at("condition").get<std::string>().c_str(),
                fixed(c.at("span_agreement").get<double>(), 3).c_str(),
                fixed(c.at("box_agreement").get<double>(), 3).c_str());
  }
  std::cout << r.at("sessions") << " sessions, " << r.at("raters") << " rater records\n";
}

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

void run_serve(const std::string& bundle_dir, const std::string& host, int port,
               const std::string& marks, const std::string& sessions) {
  Json opts = Json::object();
  if (!marks.empty()) opts["marks_path"] = marks;
  if (!sessions.empty()) opts["sessions_path"] = sessions;
  BundleHandle bundle(bundle_dir, opts);
  fg_server* server = nullptr;
  check(fg_server_start(bundle.get(), host.c_str(), port, &server));
  std::cout << "listening on http://" << host << ":" << fg_server_port(server) << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  fg_server_stop(server);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgraph: faceted functional search and concept-graph inspiration"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and report statistics");
  std::string ingest_in, ingest_out, ingest_extract = "none";
  ingest->add_option("--input,input", ingest_in, "Corpus file")->required();
  ingest->add_option("--output", ingest_out, "Write the canonical corpus here");
  ingest->add_option("--extract", ingest_extract, "Replace spans with extractor output")
      ->check(CLI::IsMember({"none", "heuristic"}));

  // build
  auto* build = app.add_subcommand("build", "Build an index bundle");
  std::string build_out, build_config;
  std::map<std::string, std::string> settings;
  std::vector<std::string> set_pairs;
  build->add_option("--out", build_out, "Bundle directory")->required();
  build->add_option("--config", build_config, "JSON config file");
  const std::vector<std::pair<std::string, std::string>> build_flags = {
      {"--corpus", "corpus"},           {"--vectors", "vectors"},
      {"--span-vectors", "span_vectors"}, {"--dim", "dim"},
      {"--seed", "seed"},               {"--k", "k"},
      {"--purpose-k", "purpose_k"},     {"--mechanism-k", "mechanism_k"},
      {"--k-grid", "k_grid"},           {"--restarts", "restarts"},
      {"--min-support", "min_support"}, {"--min-confidence", "min_confidence"},
      {"--tau", "tau"},                 {"--selection", "selection"}};
  std::map<std::string, std::string> flag_values;
  for (const auto& [flag, key] : build_flags) {
    build->add_option(flag, flag_values[key], "Setting '" + key + "'");
  }
  build->add_option("--set", set_pairs, "Any setting as key=value");

  // search
  auto* search = app.add_subcommand("search", "Faceted search");
  std::string search_bundle, method = "avg", combine = "mean";
  std::vector<std::string> pp, np, pm, nm;
  double neg_percentile = 90.0;
  int limit = 20;
  search->add_option("--bundle", search_bundle, "Bundle directory")->required();
  search->add_option("--purpose", pp, "Positive purpose chunk");
  search->add_option("--not-purpose", np, "Negated purpose chunk");
  search->add_option("--mechanism", pm, "Positive mechanism chunk");
  search->add_option("--not-mechanism", nm, "Negated mechanism chunk");
  search->add_option("--method", method)->check(CLI::IsMember({"avg", "maxmin"}));
  search->add_option("--neg-percentile", neg_percentile)->check(CLI::Range(0.0, 100.0));
  search->add_option("--limit", limit)->check(CLI::PositiveNumber);
  search->add_option("--combine", combine)->check(CLI::IsMember({"mean", "sum", "purpose-only"}));

  // inspire
  auto* inspire = app.add_subcommand("inspire", "Generate an inspiration session");
  std::string inspire_bundle, seed_text, session_out, session_id, abstractions, weight = "cosine";
  std::vector<std::string> conditions;
  int boxes = 0, variants = 0, k = 5, top_r = 3;
  std::uint64_t rng_seed = 7;
  inspire->add_option("--bundle", inspire_bundle, "Bundle directory")->required();
  inspire->add_option("--seed", seed_text, "Seed problem text")->required();
  inspire->add_option("--boxes", boxes, "Total boxes (a multiple of the condition count)");
  inspire->add_option("--variants", variants, "Boxes per condition");
  inspire->add_option("--k", k, "Spans per box")->check(CLI::PositiveNumber);
  inspire->add_option("--top-r", top_r, "Consequents taken from the graph");
  inspire->add_option("--rng-seed", rng_seed, "Shuffle and sampling seed");
  inspire->add_option("--session-id", session_id);
  inspire->add_option("--condition", conditions, "Restrict to these conditions");
  inspire->add_option("--abstractions", abstractions, "Seed -> abstraction spans file");
  inspire->add_option("--textrank-weight", weight)->check(CLI::IsMember({"cosine", "lexical"}));
  inspire->add_option("--out", session_out, "Append the session record to this file");

  // graph
  auto* graph = app.add_subcommand("graph", "Concept graph queries");
  graph->require_subcommand(1);
  auto* neighbors = graph->add_subcommand("neighbors", "Neighbors of a concept");
  std::string graph_bundle, concept_id, direction = "out";
  std::size_t top = 3;
  neighbors->add_option("--bundle", graph_bundle, "Bundle directory")->required();
  neighbors->add_option("--concept,concept", concept_id, "Concept id")->required();
  neighbors->add_option("--direction", direction)->check(CLI::IsMember({"in", "out", "both"}));
  neighbors->add_option("--top", top, "Neighbors to list (0 = all)");
  auto* edge = graph->add_subcommand("edge", "Provenance of one edge");
  std::string edge_bundle, edge_from, edge_to;
  edge->add_option("--bundle", edge_bundle, "Bundle directory")->required();
  edge->add_option("--from", edge_from)->required();
  edge->add_option("--to", edge_to)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluation harnesses");
  eval->require_subcommand(1);
  auto* eval_search = eval->add_subcommand("search", "MAP and NDCG per method");
  std::string judgments, queries, eval_bundle;
  std::size_t cutoff = 20;
  bool zero_unjudged = false;
  eval_search->add_option("--judgments", judgments)->required();
  eval_search->add_option("--queries", queries, "Score live rankings for these queries");
  eval_search->add_option("--bundle", eval_bundle, "Bundle used with --queries");
  eval_search->add_option("--cutoff", cutoff)->check(CLI::PositiveNumber);
  eval_search->add_flag("--zero-unjudged", zero_unjudged,
                        "Score queries without relevant documents as 0");
  auto* eval_extraction = eval->add_subcommand("extraction", "Token-level P/R/F1 and P@K");
  std::string pred, gold;
  std::vector<std::size_t> ks;
  eval_extraction->add_option("--pred", pred)->required();
  eval_extraction->add_option("--gold", gold)->required();
  eval_extraction->add_option("--k", ks, "Cutoffs for precision at K");
  auto* eval_inspiration = eval->add_subcommand("inspiration", "Rater agreement per condition");
  std::string sessions;
  std::vector<std::string> marks;
  std::size_t min_raters = 2, min_spans = 2;
  eval_inspiration->add_option("--session,--sessions", sessions)->required();
  eval_inspiration->add_option("--marks", marks)->required();
  eval_inspiration->add_option("--min-raters", min_raters);
  eval_inspiration->add_option("--min-spans", min_spans);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string serve_bundle, host = "127.0.0.1", marks_log, sessions_log;
  int port = 8080;
  serve->add_option("--bundle", serve_bundle, "Bundle directory")->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--marks", marks_log, "Append-only marks log");
  serve->add_option("--sessions", sessions_log, "Append generated sessions here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (ingest->parsed()) {
      run_ingest(o, ingest_in, ingest_out, ingest_extract);
    } else if (build->parsed()) {
      for (const auto& [key, value] : flag_values) {
        if (!value.empty()) settings[key] = value;
      }
      for (const auto& pair : set_pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
          std::cerr << "error: --set expects key=value, got '" << pair << "'\n\n" << app.help();
          return 2;
        }
        settings[pair.substr(0, eq)] = pair.substr(eq + 1);
      }
      run_build(o, settings, build_config, build_out);
    } else if (search->parsed()) {
      Json q = {{"purpose", pp},       {"not_purpose", np}, {"mechanism", pm},
                {"not_mechanism", nm}, {"method", method},  {"neg_percentile", neg_percentile},
                {"limit", limit},      {"combine", combine}};
      run_search(o, search_bundle, q);
    } else if (inspire->parsed()) {
      Json req = {{"seed", seed_text}, {"k", k}, {"top_r", top_r}, {"rng_seed", rng_seed},
                  {"textrank_weight", weight}};
      if (boxes > 0) req["boxes"] = boxes;
      if (variants > 0) req["variants"] = variants;
      if (!session_id.empty()) req["session_id"] = session_id;
      if (!conditions.empty()) req["conditions"] = conditions;
      if (!abstractions.empty()) req["abstractions"] = abstractions;
      run_inspire(o, inspire_bundle, req, session_out);
    } else if (neighbors->parsed()) {
      run_neighbors(o, graph_bundle, concept_id, direction, top);
    } else if (edge->parsed()) {
      run_edge(o, edge_bundle, edge_from, edge_to);
    } else if (eval_search->parsed()) {
      Json req = {{"judgments", judgments}, {"cutoff", cutoff},
                  {"zero_when_unjudged", zero_unjudged}};
      if (!queries.empty()) {
        if (eval_bundle.empty()) {
          std::cerr << "error: --queries requires --bundle\n\n" << eval_search->help();
          return 2;
        }
        req["queries"] = queries;
        req["bundle"] = eval_bundle;
      }
      run_eval_search(o, req);
    } else if (eval_extraction->parsed()) {
      Json req = {{"pred", pred}, {"gold", gold}};
      if (!ks.empty()) req["k"] = ks;
      run_eval_extraction(o, req);
    } else if (eval_inspiration->parsed()) {
      run_eval_inspiration(o, {{"sessions", sessions},
                               {"marks", marks},
                               {"min_raters", min_raters},
                               {"min_spans", min_spans}});
    } else if (serve->parsed()) {
      run_serve(serve_bundle, host, port, marks_log, sessions_log);
    }
  } catch (const CliFailure& f) {
    (void)f;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [cli] internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
