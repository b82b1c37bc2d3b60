// dialslu/nn/adamw.h

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

#ifndef DIALSLU_NN_ADAMW_H_
#define DIALSLU_NN_ADAMW_H_

#include <vector>

#include "dialslu/nn/param.h"

namespace dialslu {
namespace nn {

struct AdamWConfig {
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
  float weight_decay = 0.01f;
  float clip_norm = 5.0f;  // global gradient norm; <= 0 disables clipping
};

// Adam with decoupled weight decay and global-norm gradient clipping.
// Gradients are consumed (zeroed) by step().
class AdamW {
 public:
  AdamW(std::vector<Param*> params, const AdamWConfig& cfg = {});

  void step(float lr);

  // Global L2 norm of the current gradients (before clipping).
  double grad_norm() const;

 private:
  std::vector<Param*> params_;
  AdamWConfig cfg_;
  std::vector<Tensor> m_, v_;
  long long t_ = 0;
};

}  // namespace nn
}  // namespace dialslu

#endif  // DIALSLU_NN_ADAMW_H_
