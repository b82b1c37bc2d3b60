// tests/oracles.h

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

// Brute-force reference implementations used by unit and acceptance tests.
// Everything here is deliberately independent of the production dynamic
// programming code: alignments and paths are enumerated explicitly.

#ifndef DIALSLU_TESTS_ORACLES_H_
#define DIALSLU_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dialslu/util/rng.h"
#include "dialslu/util/tensor.h"

namespace dialslu {
namespace oracles {

inline double lse2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// Sum over all transducer alignments by explicit enumeration: from node
// (t, u), emit the next target label (u+1) or blank (t+1); the path ends
// with the blank emitted at (T-1, U). Returns the total log-probability.
inline double rnnt_enumerate(const Tensor& log_probs, int T,
                             const std::vector<int>& target, int blank) {
  const int U = static_cast<int>(target.size());
  const int U1 = U + 1;
  double total = -std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> walk = [&](int t, int u, double acc) {
    const float* node = log_probs.row(t * U1 + u);
    if (t == T - 1 && u == U) {
      total = lse2(total, acc + node[blank]);
    } else if (t < T - 1) {
      walk(t + 1, u, acc + node[blank]);
    }
    if (u < U) {
      walk(t, u + 1, acc + node[target[u]]);
    }
  };
  if (T > 0) walk(0, 0, 0.0);
  return total;
}

// Sum over all V^T frame label paths whose collapse (merge repeats, drop
// blanks) equals target.
inline double ctc_enumerate(const Tensor& frame_log_probs,
                            const std::vector<int>& target, int blank) {
  const int T = frame_log_probs.rows;
  const int V = frame_log_probs.cols;
  double total = -std::numeric_limits<double>::infinity();
  std::vector<int> path(T);
  std::function<void(int, double)> walk = [&](int t, double acc) {
    if (t == T) {
      std::vector<int> collapsed;
      int prev = -1;
      for (int v : path) {
        if (v != prev && v != blank) collapsed.push_back(v);
        prev = v;
      }
      if (collapsed == target) total = lse2(total, acc);
      return;
    }
    for (int v = 0; v < V; ++v) {
      path[t] = v;
      walk(t + 1, acc + frame_log_probs.at(t, v));
    }
  };
  walk(0, 0.0);
  return total;
}

// Random row-normalized log-probability matrix.
inline Tensor random_log_dist(Rng& rng, int rows, int cols) {
  Tensor t(rows, cols);
  rng.fill_uniform(t.data.data(), rows * cols, -4.0f, 2.0f);
  for (int r = 0; r < rows; ++r) {
    float* row = t.row(r);
    double mx = row[0];
    for (int c = 1; c < cols; ++c) mx = std::max<double>(mx, row[c]);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) sum += std::exp(row[c] - mx);
    const float lz = static_cast<float>(mx + std::log(sum));
    for (int c = 0; c < cols; ++c) row[c] -= lz;
  }
  return t;
}

// Central finite difference of a scalar loss with respect to one tensor
// entry, using the exactly representable float evaluation points.
inline double central_difference(Tensor& x, size_t flat_index, double h,
                                 const std::function<double()>& eval) {
  const float orig = x.data[flat_index];
  const float hi = static_cast<float>(static_cast<double>(orig) + h);
  const float lo = static_cast<float>(static_cast<double>(orig) - h);
  x.data[flat_index] = hi;
  const double f_hi = eval();
  x.data[flat_index] = lo;
  const double f_lo = eval();
  x.data[flat_index] = orig;
  const double h_eff = static_cast<double>(hi) - static_cast<double>(lo);
  return (f_hi - f_lo) / h_eff;
}

inline double relative_error(double a, double b, double floor = 1e-2) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracles
}  // namespace dialslu

#endif  // DIALSLU_TESTS_ORACLES_H_
