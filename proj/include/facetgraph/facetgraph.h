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


/* C interface to the facetgraph engine.
 *
 * Handles are opaque. Functions return FG_OK or an error status; the message
 * and pipeline stage of the most recent failure on the calling thread are
 * available from fg_last_error() and fg_last_error_stage(). Strings returned
 * through `char**` out-parameters are JSON documents owned by the caller and
 * released with fg_string_free().
 */

#ifndef FACETGRAPH_FACETGRAPH_H_
#define FACETGRAPH_FACETGRAPH_H_

#include <stddef.h>

#if defined(_WIN32)
#define FG_API __declspec(dllexport)
#else
#define FG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fg_status {
  FG_OK = 0,
  FG_ERR_INVALID_ARGUMENT = 1,
  FG_ERR_IO = 2,
  FG_ERR_PARSE = 3,
  FG_ERR_VALIDATION = 4,
  FG_ERR_NOT_FOUND = 5,
  FG_ERR_OVER_CONSTRAINED = 6,
  FG_ERR_INTEGRITY = 7,
  FG_ERR_INTERNAL = 8
} fg_status;

typedef struct fg_bundle fg_bundle;
typedef struct fg_server fg_server;

FG_API const char* fg_version(void);
FG_API const char* fg_status_name(fg_status status);
FG_API const char* fg_last_error(void);
FG_API const char* fg_last_error_stage(void);
FG_API void fg_string_free(char* str);

/* Corpus ingestion: {input, output?, extract?: "none" | "heuristic"}. */
FG_API fg_status fg_ingest(const char* request_json, char** result_json);

/* Builds a bundle in `out_dir`. `settings_json` is an object of setting
 * overrides (may be NULL); `config_file` may be NULL. Environment variables
 * prefixed FFS_ sit between the two. Returns the manifest. */
FG_API fg_status fg_build_index(const char* settings_json, const char* config_file,
                                const char* out_dir, char** manifest_json);

/* Opens a bundle. `options_json` may be NULL or {marks_path?, sessions_path?}. */
FG_API fg_status fg_bundle_open(const char* dir, const char* options_json, fg_bundle** out);
FG_API void fg_bundle_close(fg_bundle* bundle);
/* Swaps in a freshly loaded bundle; NULL reloads the current directory. */
FG_API fg_status fg_bundle_reload(fg_bundle* bundle, const char* dir);
FG_API fg_status fg_bundle_manifest(fg_bundle* bundle, char** manifest_json);

/* Generic request against the HTTP routing table. `params_json` may be NULL or
 * an object of query parameters; `body` may be NULL. On FG_OK `http_status`
 * and `response_json` mirror what the HTTP server would send. */
FG_API fg_status fg_request(fg_bundle* bundle, const char* method, const char* path,
                            const char* params_json, const char* body, int* http_status,
                            char** response_json);

FG_API fg_status fg_search(fg_bundle* bundle, const char* query_json, char** result_json);
FG_API fg_status fg_inspire(fg_bundle* bundle, const char* request_json, char** session_json);
FG_API fg_status fg_graph_neighbors(fg_bundle* bundle, const char* concept_id,
                                    const char* direction, size_t top, char** result_json);
FG_API fg_status fg_graph_edge(fg_bundle* bundle, const char* from, const char* to,
                               char** result_json);

FG_API fg_status fg_eval_search(const char* request_json, char** report_json);
FG_API fg_status fg_eval_extraction(const char* request_json, char** report_json);
FG_API fg_status fg_eval_inspiration(const char* request_json, char** report_json);

/* Serves `bundle` over HTTP on a background thread. Port 0 picks a free port. */
FG_API fg_status fg_server_start(fg_bundle* bundle, const char* host, int port, fg_server** out);
FG_API int fg_server_port(const fg_server* server);
/* Blocks until the server stops. */
FG_API fg_status fg_server_wait(fg_server* server);
/* Stops the server and releases it. */
FG_API void fg_server_stop(fg_server* server);

#ifdef __cplusplus
}
#endif

#endif /* FACETGRAPH_FACETGRAPH_H_ */
