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


#ifndef FACETGRAPH_SERVICE_HPP_
#define FACETGRAPH_SERVICE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "facetgraph/bundle.hpp"
#include "facetgraph/error.hpp"
#include "facetgraph/records.hpp"

namespace facetgraph {

// Request handlers over one bundle snapshot. Every response carries the
// snapshot's build_id.
Json health_json(const Bundle& bundle);
Json search_json(const Bundle& bundle, const Json& query);
Json product_json(const Bundle& bundle, const std::string& doc_id);
Json concepts_json(const Bundle& bundle, const std::optional<std::string>& kind);
Json concept_json(const Bundle& bundle, const std::string& concept_id);
Json neighbors_json(const Bundle& bundle, const std::string& concept_id,
                    const std::string& direction, std::size_t top);
Json edge_json(const Bundle& bundle, const std::string& from, const std::string& to);
// Body: {seed, boxes?, variants?, k?, top_r?, rng_seed?, session_id?,
// conditions?, textrank_weight?, abstractions?}.
Json inspire_json(const Bundle& bundle, const Json& request);

Json error_json(const Error& error);
int http_status(ErrorCode code);

struct ServiceOptions {
  std::string marks_path;     // append-only marks log; empty disables POST /api/marks
  std::string sessions_path;  // generated sessions are appended here when set
};

struct ServiceResponse {
  int status = 200;
  Json body;
};

// Routes requests to the handlers above against an atomically swappable
// bundle snapshot.
class Service {
 public:
  Service(const std::string& bundle_dir, ServiceOptions options = {});

  std::shared_ptr<const Bundle> snapshot() const;
  // Loads `dir` (or the current directory when empty) and swaps it in. The
  // previous snapshot stays live for in-flight requests.
  std::string reload(const std::string& dir = {});

  ServiceResponse handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& params,
                         const std::string& body);

 private:
  ServiceResponse dispatch(const std::string& method, const std::string& path,
                           const std::map<std::string, std::string>& params,
                           const std::string& body);
  Json append_marks(const Bundle& bundle, const std::string& body) const;

  mutable std::mutex mutex_;
  std::shared_ptr<const Bundle> bundle_;
  std::string bundle_dir_;
  ServiceOptions options_;
  mutable std::mutex append_mutex_;
};

}  // namespace facetgraph

#endif  // FACETGRAPH_SERVICE_HPP_
