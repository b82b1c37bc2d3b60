// dialslu/nn/adamw.cc

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

#include "dialslu/nn/adamw.h"

#include <cmath>

#include "dialslu/util/errors.h"

namespace dialslu {
namespace nn {

AdamW::AdamW(std::vector<Param*> params, const AdamWConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (Param* p : params_) {
    m_.emplace_back(p->value.rows, p->value.cols);
    v_.emplace_back(p->value.rows, p->value.cols);
  }
}

double AdamW::grad_norm() const {
  double sq = 0.0;
  for (const Param* p : params_) {
    for (float g : p->grad.data) sq += static_cast<double>(g) * g;
  }
  return std::sqrt(sq);
}

void AdamW::step(float lr) {
  ++t_;
  float scale = 1.0f;
  const double norm = grad_norm();
  if (!std::isfinite(norm)) {
    throw NumericError("non-finite gradient norm in optimizer step");
  }
  if (cfg_.clip_norm > 0.0f && norm > cfg_.clip_norm) {
    scale = cfg_.clip_norm / static_cast<float>(norm);
  }
  const float bc1 = 1.0f - std::pow(cfg_.beta1, static_cast<float>(t_));
  const float bc2 = 1.0f - std::pow(cfg_.beta2, static_cast<float>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param* p = params_[i];
    float* m = m_[i].data.data();
    float* v = v_[i].data.data();
    float* w = p->value.data.data();
    float* g = p->grad.data.data();
    const size_t n = p->value.size();
    for (size_t j = 0; j < n; ++j) {
      const float gj = g[j] * scale;
      m[j] = cfg_.beta1 * m[j] + (1.0f - cfg_.beta1) * gj;
      v[j] = cfg_.beta2 * v[j] + (1.0f - cfg_.beta2) * gj * gj;
      const float mhat = m[j] / bc1;
      const float vhat = v[j] / bc2;
      w[j] -= lr * (mhat / (std::sqrt(vhat) + cfg_.eps) +
                    cfg_.weight_decay * w[j]);
      g[j] = 0.0f;
    }
  }
}

}  // namespace nn
}  // namespace dialslu
