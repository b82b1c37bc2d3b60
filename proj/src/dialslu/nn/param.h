// dialslu/nn/param.h

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

#ifndef DIALSLU_NN_PARAM_H_
#define DIALSLU_NN_PARAM_H_

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"
#include "dialslu/util/tensor.h"

namespace dialslu {
namespace nn {

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape, accumulated by backward passes

  void zero_grad() { grad.fill(0.0f); }
};

// Owns a model's parameters in a fixed registration order, which also fixes
// the checkpoint layout and the optimizer update order.
class ParamSet {
 public:
  Param* create(const std::string& name, int rows, int cols) {
    if (find(name) != nullptr) {
      throw ContractError("duplicate parameter name: " + name);
    }
    auto p = std::make_unique<Param>();
    p->name = name;
    p->value = Tensor(rows, cols);
    p->grad = Tensor(rows, cols);
    params_.push_back(std::move(p));
    return params_.back().get();
  }

  // Uniform fan-in scaling: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Param* create_uniform(const std::string& name, int rows, int cols,
                        int fan_in, Rng& rng) {
    Param* p = create(name, rows, cols);
    const float bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
    rng.fill_uniform(p->value.data.data(), static_cast<int>(p->value.size()),
                     -bound, bound);
    return p;
  }

  Param* find(const std::string& name) const {
    for (const auto& p : params_) {
      if (p->name == name) return p.get();
    }
    return nullptr;
  }

  Param* at(const std::string& name) const {
    Param* p = find(name);
    if (p == nullptr) throw ContractError("unknown parameter: " + name);
    return p;
  }

  std::vector<Param*> all() const {
    std::vector<Param*> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.get());
    return out;
  }

  void zero_grads() {
    for (const auto& p : params_) p->zero_grad();
  }

  size_t size() const { return params_.size(); }

 private:
  std::vector<std::unique_ptr<Param>> params_;
};

}  // namespace nn
}  // namespace dialslu

#endif  // DIALSLU_NN_PARAM_H_
