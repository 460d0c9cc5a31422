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

#include "facetgraph/server.hpp"

#include "httplib.h"

namespace facetgraph {

struct HttpServer::Impl {
  std::shared_ptr<Service> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<Service> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto handler = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    const auto out = svc->handle(req.method, req.path, params, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  };
  auto& s = impl_->server;
  s.Get(R"(/api/.*)", handler);
  s.Post(R"(/api/.*)", handler);
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    Json j;
    j["code"] = "not_found";
    j["stage"] = "route";
    j["message"] = "no route for " + req.method + " " + req.path;
    res.set_content(j.dump(), "application/json; charset=utf-8");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "serve",
                "cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace facetgraph
