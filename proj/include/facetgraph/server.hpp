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


#ifndef FACETGRAPH_SERVER_HPP_
#define FACETGRAPH_SERVER_HPP_

#include <memory>
#include <string>

#include "facetgraph/service.hpp"

namespace facetgraph {

// HTTP front end over a Service. Requests are served on a worker pool; the
// service snapshot makes them independent of concurrent reloads.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<Service> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds `host:port` (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  // Returns once listen() accepts connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace facetgraph

#endif  // FACETGRAPH_SERVER_HPP_
