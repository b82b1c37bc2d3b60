// dialslu/context/model.h

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

#ifndef DIALSLU_CONTEXT_MODEL_H_
#define DIALSLU_CONTEXT_MODEL_H_

#include <string>
#include <vector>

#include "dialslu/context/history.h"
#include "dialslu/context/tokenizer.h"
#include "dialslu/nn/adamw.h"
#include "dialslu/nn/checkpoint.h"
#include "dialslu/nn/tape.h"

namespace dialslu {

constexpr int kContextEmbeddingDim = 128;

// 128-dim dense summary of a dialog prefix, read from the CLS position.
struct ContextEmbedding {
  std::vector<float> values;  // exactly kContextEmbeddingDim entries
};

struct ContextModelConfig {
  int layers = 2;
  int heads = 4;
  int d_model = 128;
  int d_ff = 256;
  int max_len = 256;
  int proj_dim = kContextEmbeddingDim;
  std::string task = "intent";  // "intent" (8-way softmax) or
                                // "dialog_act" (16 sigmoids)

  int num_classes() const { return task == "intent" ? 8 : 16; }
  nlohmann::ordered_json to_json() const;
  static ContextModelConfig from_json(const nlohmann::ordered_json& j);
};

// From-scratch transformer encoder classifier. The CLS hidden state is
// linearly projected to 128 dims; the task head sits on the projection, and
// the projection itself is the dialog-context embedding.
class ContextModel {
 public:
  ContextModel(const ContextModelConfig& cfg, Tokenizer tokenizer,
               uint64_t seed);
  static ContextModel load(const std::string& path);
  void save(const std::string& path) const;

  const ContextModelConfig& config() const { return cfg_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }
  nn::ParamSet& params() { return params_; }

  struct Forward {
    nn::Tape::Var projection;  // (1, proj_dim)
    nn::Tape::Var logits;      // (1, num_classes)
  };
  // Builds the full graph for one token sequence. Throws LengthError when
  // ids exceed max_len (truncation belongs upstream).
  Forward forward(nn::Tape& tape, const std::vector<int>& ids) const;

  // Task probabilities for a training-form sequence: softmax for intent,
  // independent sigmoids for dialog acts.
  std::vector<float> classify(const std::vector<int>& ids) const;

  // 128-dim embedding of the [CLS] c [SEP] form for turn t.
  ContextEmbedding embed_context(const Conversation& conversation, int t,
                                 const HistorySpec& spec) const;

 private:
  ContextModelConfig cfg_;
  Tokenizer tokenizer_;
  nn::ParamSet params_;

  struct Layer {
    nn::Param *ln1_g, *ln1_b;
    nn::Param *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
    nn::Param *ln2_g, *ln2_b;
    nn::Param *ff_w1, *ff_b1, *ff_w2, *ff_b2;
  };
  nn::Param* tok_emb_;
  nn::Param* pos_emb_;
  std::vector<Layer> layers_;
  nn::Param *final_g_, *final_b_;
  nn::Param *proj_w_, *proj_b_;
  nn::Param *head_w_, *head_b_;

  void wire_params(Rng* rng);
};

}  // namespace dialslu

#endif  // DIALSLU_CONTEXT_MODEL_H_
