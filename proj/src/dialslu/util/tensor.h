// dialslu/util/tensor.h

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

#ifndef DIALSLU_UTIL_TENSOR_H_
#define DIALSLU_UTIL_TENSOR_H_

#include <cstddef>
#include <vector>

namespace dialslu {

// Dense row-major float32 matrix. Vectors are 1 x n or n x 1 as convenient.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Tensor() = default;
  Tensor(int r, int c)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0f) {}

  static Tensor zeros(int r, int c) { return Tensor(r, c); }

  float* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const float* row(int r) const {
    return data.data() + static_cast<size_t>(r) * cols;
  }
  float& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  float at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  bool same_shape(const Tensor& o) const {
    return rows == o.rows && cols == o.cols;
  }
  void fill(float v) { std::fill(data.begin(), data.end(), v); }
};

}  // namespace dialslu

#endif  // DIALSLU_UTIL_TENSOR_H_
