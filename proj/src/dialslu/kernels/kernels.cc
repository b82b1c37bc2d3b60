// dialslu/kernels/kernels.cc

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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace dialslu {
namespace kernels {

namespace {

float scalar_dot(const float* x, const float* y, int n) {
  float acc = 0.0f;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void scalar_axpy(float a, const float* x, float* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_gemm(int m, int n, int k, const float* a, int lda, const float* b,
                 int ldb, float* c, int ldc, bool accumulate) {
  for (int i = 0; i < m; ++i) {
    float* crow = c + static_cast<size_t>(i) * ldc;
    if (!accumulate) std::fill(crow, crow + n, 0.0f);
    const float* arow = a + static_cast<size_t>(i) * lda;
    for (int p = 0; p < k; ++p) {
      const float av = arow[p];
      if (av == 0.0f) continue;
      const float* brow = b + static_cast<size_t>(p) * ldb;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void scalar_gemv(int m, int k, const float* a, int lda, const float* x,
                 float* y, bool accumulate) {
  for (int i = 0; i < m; ++i) {
    float acc = scalar_dot(a + static_cast<size_t>(i) * lda, x, k);
    y[i] = accumulate ? y[i] + acc : acc;
  }
}

const Backend kScalarBackend = {"scalar", scalar_dot, scalar_axpy, scalar_gemm,
                                scalar_gemv};

const Backend* g_active = nullptr;

const Backend* pick_default() {
  if (const char* env = std::getenv("DIALSLU_KERNELS")) {
    if (std::string(env) == "scalar") return &kScalarBackend;
    if (std::string(env) == "avx2" && avx2_backend() != nullptr)
      return avx2_backend();
  }
  if (const Backend* v = avx2_backend()) return v;
  return &kScalarBackend;
}

}  // namespace

const Backend& scalar_backend() { return kScalarBackend; }

const Backend& backend() {
  if (g_active == nullptr) g_active = pick_default();
  return *g_active;
}

void set_backend(const std::string& name) {
  if (name == "scalar") {
    g_active = &kScalarBackend;
    return;
  }
  if (name == "avx2") {
    if (const Backend* v = avx2_backend()) {
      g_active = v;
      return;
    }
    throw std::invalid_argument("avx2 kernels unavailable on this machine");
  }
  throw std::invalid_argument("unknown kernel backend: " + name);
}

void vec_tanh(const float* x, float* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = std::tanh(x[i]);
}

void vec_sigmoid(const float* x, float* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = 1.0f / (1.0f + std::exp(-x[i]));
}

float log_softmax(float* x, int n) {
  float mx = -std::numeric_limits<float>::infinity();
  for (int i = 0; i < n; ++i) mx = std::max(mx, x[i]);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(static_cast<double>(x[i] - mx));
  const float lz = mx + static_cast<float>(std::log(s));
  for (int i = 0; i < n; ++i) x[i] -= lz;
  return lz;
}

double logsumexp(const double* x, int n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) mx = std::max(mx, x[i]);
  if (!std::isfinite(mx)) return mx;  // all -inf (or some +inf)
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(x[i] - mx);
  return mx + std::log(s);
}

double logsumexp2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double mx = std::max(a, b);
  return mx + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace kernels
}  // namespace dialslu
