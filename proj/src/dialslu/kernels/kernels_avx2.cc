// dialslu/kernels/kernels_avx2.cc

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

#include "dialslu/kernels/kernels.h"

// This translation unit is compiled with -mavx2 -mfma on x86-64. The CPU is
// still probed at runtime; avx2_backend() returns nullptr when the machine
// cannot execute these kernels.

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cstddef>

namespace dialslu {
namespace kernels {

namespace {

inline float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

float avx2_dot(const float* x, const float* y, int n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  int i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i),
                           acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i + 8),
                           _mm256_loadu_ps(y + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i),
                           acc0);
  }
  float acc = hsum256(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void avx2_axpy(float a, const float* x, float* y, int n) {
  const __m256 va = _mm256_set1_ps(a);
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// 4x16 register tile: four C rows, two 8-lane column blocks each.
inline void gemm_tile4x16(int k, const float* a, int lda, const float* b,
                          int ldb, float* c, int ldc, bool accumulate) {
  __m256 c00, c01, c10, c11, c20, c21, c30, c31;
  if (accumulate) {
    c00 = _mm256_loadu_ps(c + 0 * ldc);
    c01 = _mm256_loadu_ps(c + 0 * ldc + 8);
    c10 = _mm256_loadu_ps(c + 1 * ldc);
    c11 = _mm256_loadu_ps(c + 1 * ldc + 8);
    c20 = _mm256_loadu_ps(c + 2 * ldc);
    c21 = _mm256_loadu_ps(c + 2 * ldc + 8);
    c30 = _mm256_loadu_ps(c + 3 * ldc);
    c31 = _mm256_loadu_ps(c + 3 * ldc + 8);
  } else {
    c00 = c01 = c10 = c11 = c20 = c21 = c30 = c31 = _mm256_setzero_ps();
  }
  for (int p = 0; p < k; ++p) {
    const __m256 b0 = _mm256_loadu_ps(b + static_cast<size_t>(p) * ldb);
    const __m256 b1 = _mm256_loadu_ps(b + static_cast<size_t>(p) * ldb + 8);
    __m256 av = _mm256_set1_ps(a[0 * lda + p]);
    c00 = _mm256_fmadd_ps(av, b0, c00);
    c01 = _mm256_fmadd_ps(av, b1, c01);
    av = _mm256_set1_ps(a[1 * lda + p]);
    c10 = _mm256_fmadd_ps(av, b0, c10);
    c11 = _mm256_fmadd_ps(av, b1, c11);
    av = _mm256_set1_ps(a[2 * lda + p]);
    c20 = _mm256_fmadd_ps(av, b0, c20);
    c21 = _mm256_fmadd_ps(av, b1, c21);
    av = _mm256_set1_ps(a[3 * lda + p]);
    c30 = _mm256_fmadd_ps(av, b0, c30);
    c31 = _mm256_fmadd_ps(av, b1, c31);
  }
  _mm256_storeu_ps(c + 0 * ldc, c00);
  _mm256_storeu_ps(c + 0 * ldc + 8, c01);
  _mm256_storeu_ps(c + 1 * ldc, c10);
  _mm256_storeu_ps(c + 1 * ldc + 8, c11);
  _mm256_storeu_ps(c + 2 * ldc, c20);
  _mm256_storeu_ps(c + 2 * ldc + 8, c21);
  _mm256_storeu_ps(c + 3 * ldc, c30);
  _mm256_storeu_ps(c + 3 * ldc + 8, c31);
}

inline void gemm_tile1x8(int k, const float* a, const float* b, int ldb,
                         float* c, bool accumulate) {
  __m256 acc = accumulate ? _mm256_loadu_ps(c) : _mm256_setzero_ps();
  for (int p = 0; p < k; ++p) {
    acc = _mm256_fmadd_ps(_mm256_set1_ps(a[p]),
                          _mm256_loadu_ps(b + static_cast<size_t>(p) * ldb),
                          acc);
  }
  _mm256_storeu_ps(c, acc);
}

void avx2_gemm(int m, int n, int k, const float* a, int lda, const float* b,
               int ldb, float* c, int ldc, bool accumulate) {
  int j = 0;
  for (; j + 16 <= n; j += 16) {
    int i = 0;
    for (; i + 4 <= m; i += 4) {
      gemm_tile4x16(k, a + static_cast<size_t>(i) * lda, lda, b + j, ldb,
                    c + static_cast<size_t>(i) * ldc + j, ldc, accumulate);
    }
    for (; i < m; ++i) {
      gemm_tile1x8(k, a + static_cast<size_t>(i) * lda, b + j, ldb,
                   c + static_cast<size_t>(i) * ldc + j, accumulate);
      gemm_tile1x8(k, a + static_cast<size_t>(i) * lda, b + j + 8, ldb,
                   c + static_cast<size_t>(i) * ldc + j + 8, accumulate);
    }
  }
  for (; j + 8 <= n; j += 8) {
    for (int i = 0; i < m; ++i) {
      gemm_tile1x8(k, a + static_cast<size_t>(i) * lda, b + j, ldb,
                   c + static_cast<size_t>(i) * ldc + j, accumulate);
    }
  }
  if (j < n) {
    for (int i = 0; i < m; ++i) {
      float* crow = c + static_cast<size_t>(i) * ldc;
      if (!accumulate) std::fill(crow + j, crow + n, 0.0f);
      const float* arow = a + static_cast<size_t>(i) * lda;
      for (int p = 0; p < k; ++p) {
        const float av = arow[p];
        const float* brow = b + static_cast<size_t>(p) * ldb;
        for (int jj = j; jj < n; ++jj) crow[jj] += av * brow[jj];
      }
    }
  }
}

void avx2_gemv(int m, int k, const float* a, int lda, const float* x, float* y,
               bool accumulate) {
  for (int i = 0; i < m; ++i) {
    const float acc = avx2_dot(a + static_cast<size_t>(i) * lda, x, k);
    y[i] = accumulate ? y[i] + acc : acc;
  }
}

const Backend kAvx2Backend = {"avx2", avx2_dot, avx2_axpy, avx2_gemm,
                              avx2_gemv};

}  // namespace

const Backend* avx2_backend() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")
             ? &kAvx2Backend
             : nullptr;
}

}  // namespace kernels
}  // namespace dialslu

#else  // non-x86 build: no AVX2 backend available

namespace dialslu {
namespace kernels {

const Backend* avx2_backend() { return nullptr; }

}  // namespace kernels
}  // namespace dialslu

#endif
