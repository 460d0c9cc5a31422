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

#ifndef FACETGRAPH_ERROR_HPP_
#define FACETGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace facetgraph {

// Error categories. The numeric values are part of the C API (fg_status).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kValidation = 4,
  kNotFound = 5,
  kOverConstrained = 6,
  kIntegrity = 7,
  kInternal = 8,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the library carries a code and the pipeline stage
// that produced it ("load_corpus", "cluster", "search", ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string stage, const std::string& message)
      : std::runtime_error(message), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const { return code_; }
  const std::string& stage() const { return stage_; }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace facetgraph

#endif  // FACETGRAPH_ERROR_HPP_
