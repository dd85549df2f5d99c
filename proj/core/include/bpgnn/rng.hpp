// Copyright 2026 The BPGNN Authors
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

namespace bpgnn {

// splitmix64. Every random draw in the library goes through this so runs are
// reproducible across platforms; standard-library distributions are not.
struct SplitMix64 {
  uint64_t state = 0;

  SplitMix64() = default;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in the open interval (0,1); never returns 0 or 1, so
  // log(-log(u)) is always finite.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  uint64_t below(uint64_t n) { return next() % n; }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  SplitMix64 s(a ^ (0x9e3779b97f4a7c15ull + (b << 7) + (b >> 3)));
  s.next();
  return s.next() ^ b;
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

}  // namespace bpgnn
