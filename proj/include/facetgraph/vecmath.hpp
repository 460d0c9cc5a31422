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

#ifndef FACETGRAPH_VECMATH_HPP_
#define FACETGRAPH_VECMATH_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace facetgraph {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Returns false (and leaves v untouched) for the zero vector.
inline bool normalize_in_place(Vec& v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) return false;
  for (auto& x : v) x /= n;
  return true;
}

inline Vec normalized(Vec v) {
  normalize_in_place(v);
  return v;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace facetgraph

#endif  // FACETGRAPH_VECMATH_HPP_
