// Copyright 2026 The logorec Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace logorec {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, stream) so per-item generation does not
// depend on processing order.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed27ULL)));
}

// Uniform integer in [lo, hi]. Written out instead of using
// std::uniform_int_distribution so results do not depend on the standard
// library implementation.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return lo + static_cast<std::int64_t>(v % span);
}

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double standard_normal(Rng& rng);

// Fisher-Yates with uniform_int, portable across standard libraries.
template <class It>
void shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::int64_t>(last - first);
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = uniform_int(rng, 0, i);
    using std::swap;
    swap(first[i], first[j]);
  }
}

}  // namespace logorec
