// dialslu/util/rng.h

// Copyright 2026  dialslu project contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIALSLU_UTIL_RNG_H_
#define DIALSLU_UTIL_RNG_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace dialslu {

uint64_t fnv1a64(std::string_view s);
uint64_t splitmix64(uint64_t& state);

// Deterministic RNG with fully specified arithmetic, so a seed reproduces the
// same stream on any compiler and platform. splitmix64 core, Box-Muller
// normals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  // Independent stream for a named component of a larger seeded process.
  static Rng derive(uint64_t seed, std::string_view tag) {
    return Rng(seed ^ fnv1a64(tag));
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  double normal();

  void fill_normal(float* p, int n, float stddev);
  void fill_uniform(float* p, int n, float lo, float hi);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[i], v[uniform_int(0, i)]);
    }
  }

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dialslu

#endif  // DIALSLU_UTIL_RNG_H_
