// dialslu/kernels/kernels.h

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

#ifndef DIALSLU_KERNELS_KERNELS_H_
#define DIALSLU_KERNELS_KERNELS_H_

#include <cstddef>
#include <string>

namespace dialslu {
namespace kernels {

// Float32 arithmetic kernels used by every training and decoding inner loop.
// Each entry has a scalar reference implementation and, on x86-64 with AVX2,
// a vectorized variant selected once at startup. The two variants are
// equivalence-tested against each other; selection can be forced through
// set_backend() or the DIALSLU_KERNELS environment variable ("scalar",
// "avx2").
struct Backend {
  const char* name;

  // sum_i x[i] * y[i]
  float (*dot)(const float* x, const float* y, int n);

  // y[i] += a * x[i]
  void (*axpy)(float a, const float* x, float* y, int n);

  // Row-major C(m x n) = A(m x k) * B(k x n), optionally accumulating
  // into C instead of overwriting it.
  void (*gemm)(int m, int n, int k, const float* a, int lda, const float* b,
               int ldb, float* c, int ldc, bool accumulate);

  // y(m) = A(m x k) * x(k), row-major A, optionally accumulating.
  void (*gemv)(int m, int k, const float* a, int lda, const float* x, float* y,
               bool accumulate);
};

// The active backend. Chosen on first use: AVX2 when the CPU supports it,
// scalar otherwise, overridable by DIALSLU_KERNELS.
const Backend& backend();

const Backend& scalar_backend();

// nullptr when this build or CPU cannot run AVX2 code.
const Backend* avx2_backend();

// Forces a backend by name. Throws std::invalid_argument for an unknown or
// unavailable name. Intended for tests and benchmarking.
void set_backend(const std::string& name);

// Convenience wrappers through the active backend.
inline float dot(const float* x, const float* y, int n) {
  return backend().dot(x, y, n);
}
inline void axpy(float a, const float* x, float* y, int n) {
  backend().axpy(a, x, y, n);
}
inline void gemm(int m, int n, int k, const float* a, int lda, const float* b,
                 int ldb, float* c, int ldc, bool accumulate = false) {
  backend().gemm(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
}
inline void gemv(int m, int k, const float* a, int lda, const float* x,
                 float* y, bool accumulate = false) {
  backend().gemv(m, k, a, lda, x, y, accumulate);
}

// Scalar helpers shared by all backends. These stay unvectorized by hand;
// results must be identical no matter which backend is active.
void vec_tanh(const float* x, float* out, int n);
void vec_sigmoid(const float* x, float* out, int n);

// In-place log-softmax over x[0..n). Returns the log normalizer.
float log_softmax(float* x, int n);

// log(sum_i exp(x[i])) with the usual max shift; -inf on empty input.
double logsumexp(const double* x, int n);
double logsumexp2(double a, double b);

}  // namespace kernels
}  // namespace dialslu

#endif  // DIALSLU_KERNELS_KERNELS_H_
