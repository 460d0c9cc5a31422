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

#ifndef FACETGRAPH_RNG_HPP_
#define FACETGRAPH_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace facetgraph {

// Deterministic generator shared by every randomized step. The raw mt19937_64
// stream is fully specified; uniform doubles and bounded integers are derived
// here so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                       // [0, 1)
  std::size_t below(std::size_t bound);   // [0, bound)

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates over Rng::below.
template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
}

}  // namespace facetgraph

#endif  // FACETGRAPH_RNG_HPP_
