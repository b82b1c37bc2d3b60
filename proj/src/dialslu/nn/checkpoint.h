// dialslu/nn/checkpoint.h

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

#ifndef DIALSLU_NN_CHECKPOINT_H_
#define DIALSLU_NN_CHECKPOINT_H_

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialslu/nn/param.h"

namespace dialslu {
namespace nn {

// Single-file parameter archive: magic, a JSON config record, then named
// float32 tensors in the ParamSet registration order. Byte-deterministic for
// a fixed config and parameter state.
void save_checkpoint(const std::string& path,
                     const nlohmann::ordered_json& config,
                     const ParamSet& params);

struct Checkpoint {
  nlohmann::ordered_json config;
  std::vector<std::string> order;
  std::map<std::string, Tensor> tensors;

  const Tensor& at(const std::string& name) const;
};

Checkpoint load_checkpoint(const std::string& path);

// Copies every checkpoint tensor into the identically named Param; shapes
// must match exactly.
void restore_params(const Checkpoint& ckpt, ParamSet& params);

// FNV-1a over the serialized bytes; used as a checkpoint fingerprint.
uint64_t checkpoint_digest(const std::string& path);

}  // namespace nn
}  // namespace dialslu

#endif  // DIALSLU_NN_CHECKPOINT_H_
