// dialslu/transducer/model.h

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

#ifndef DIALSLU_TRANSDUCER_MODEL_H_
#define DIALSLU_TRANSDUCER_MODEL_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialslu/corpus/types.h"
#include "dialslu/features/features.h"
#include "dialslu/nn/checkpoint.h"
#include "dialslu/nn/param.h"
#include "dialslu/nn/tape.h"

namespace dialslu {

// Output layout: alphabet characters 0..40, blank at 41, then any SLU label
// tokens appended by model surgery, so the blank index never moves.
constexpr int kBlankIndex = kAlphabetSize;
constexpr int kAsrOutputs = kAlphabetSize + 1;  // 42
constexpr int kSluTokenBase = kAsrOutputs;      // first SLU label token

struct TransducerConfig {
  int input_dim = 240;   // acoustic features
  int history_dim = 0;   // 128 after input surgery, else 0
  int encoder_layers = 2;
  int encoder_hidden = 64;  // cells per layer per direction
  int predictor_hidden = 64;
  int predictor_embed = 64;
  int joint_dim = 64;
  int num_outputs = kAsrOutputs;

  // The configuration described for the full-size system; kept as a named
  // preset for documentation and scale experiments.
  static TransducerConfig paper_scale() {
    TransducerConfig cfg;
    cfg.encoder_layers = 6;
    cfg.encoder_hidden = 640;
    cfg.predictor_hidden = 1024;
    cfg.predictor_embed = 256;
    cfg.joint_dim = 256;
    return cfg;
  }

  int total_input_dim() const { return input_dim + history_dim; }

  nlohmann::ordered_json to_json() const;
  static TransducerConfig from_json(const nlohmann::ordered_json& j);
};

// Bidirectional LSTM stack shared by the CTC pre-training model and the
// transducer. Parameters are created inside the given ParamSet under
// "enc.l<i>.<dir>.*".
class EncoderStack {
 public:
  EncoderStack(nn::ParamSet& params, int input_dim, int layers, int hidden,
               Rng& rng);
  // Attaches to already-created params (checkpoint load path).
  EncoderStack(nn::ParamSet& params, int input_dim, int layers, int hidden);

  nn::Tape::Var forward(nn::Tape& tape, nn::Tape::Var x) const;
  Tensor run(const Tensor& x) const;  // inference, no tape
  int output_dim() const { return 2 * hidden_; }
  int input_dim() const { return input_dim_; }

 private:
  struct Dir {
    nn::Param* wx;
    nn::Param* wh;
    nn::Param* b;
  };
  struct Layer {
    Dir fwd, rev;
  };
  int input_dim_;
  int hidden_;
  std::vector<Layer> layers_;
};

struct Hypothesis {
  std::vector<int> tokens;  // emitted non-blank output indices
  std::vector<int> frames;  // emission frame per token, non-decreasing
  double log_score = 0.0;
};

class TransducerModel {
 public:
  TransducerModel(const TransducerConfig& cfg, uint64_t seed);
  static TransducerModel load(const std::string& path);

  const TransducerConfig& config() const { return cfg_; }
  nn::ParamSet& params() { return params_; }
  const nn::ParamSet& params() const { return params_; }
  nlohmann::ordered_json& provenance() { return provenance_; }
  const nlohmann::ordered_json& provenance() const { return provenance_; }

  void save(const std::string& path) const;

  // Concatenates the history embedding (when the model was built with one)
  // to every feature frame. history must be null for a 240-dim model and
  // non-null with config().history_dim entries otherwise.
  Tensor make_input(const FeatureSequence& feats,
                    std::span<const float> history) const;

  // Encoder states for a prepared input, one per frame.
  nn::Tape::Var encode(nn::Tape& tape, nn::Tape::Var input) const;
  Tensor encode(const Tensor& input) const;

  // Per-utterance transducer loss over the serialized target.
  nn::Tape::Var rnnt_nll(nn::Tape& tape, const Tensor& input,
                         const std::vector<int>& target) const;

  // Inference-side pieces used by greedy decoding.
  struct PredictorState {
    std::vector<float> h, c;
  };
  // Encoder states already projected to the joint width, one row per frame.
  Tensor encode_projected(const Tensor& input) const;
  PredictorState predictor_start() const;
  void predictor_step(int token, PredictorState& state) const;
  // Raw joint logits (before the softmax) for one (frame, state) pair.
  std::vector<float> joint_logits(const float* enc_proj_row,
                                  const PredictorState& state) const;
  // log P(output | enc row, predictor state); returns V log-probs.
  std::vector<float> joint_log_probs(const float* enc_proj_row,
                                     const PredictorState& state) const;

  const EncoderStack& encoder() const { return *encoder_; }

 private:
  TransducerModel(const TransducerConfig& cfg);  // params not initialized

  TransducerConfig cfg_;
  nn::ParamSet params_;
  std::unique_ptr<EncoderStack> encoder_;
  nn::Param* pred_embed_;
  nn::Param* pred_wx_;
  nn::Param* pred_wh_;
  nn::Param* pred_b_;
  nn::Param* joint_enc_w_;
  nn::Param* joint_enc_b_;
  nn::Param* joint_pred_w_;
  nn::Param* joint_pred_b_;
  nn::Param* joint_out_w_;
  nn::Param* joint_out_b_;
  nlohmann::ordered_json provenance_;

  friend class SurgeryAccess;
};

// Greedy decoding: per frame, emit argmax symbols (advancing the predictor)
// until blank or the per-frame cap, then move to the next frame.
Hypothesis greedy_decode(const TransducerModel& model,
                         const FeatureSequence& feats,
                         std::span<const float> history = {},
                         int max_symbols_per_frame = 10);

// CTC model for encoder pre-training: the same encoder stack plus a
// frame-level output head.
class CtcModel {
 public:
  CtcModel(const TransducerConfig& cfg, uint64_t seed);
  static CtcModel load(const std::string& path);

  nn::ParamSet& params() { return params_; }
  const TransducerConfig& config() const { return cfg_; }
  void save(const std::string& path) const;

  nn::Tape::Var ctc_nll(nn::Tape& tape, const Tensor& input,
                        const std::vector<int>& target) const;
  // Frame log-probs for decoding/inspection.
  Tensor frame_log_probs(const Tensor& input) const;

 private:
  explicit CtcModel(const TransducerConfig& cfg);

  TransducerConfig cfg_;
  nn::ParamSet params_;
  std::unique_ptr<EncoderStack> encoder_;
  nn::Param* out_w_;
  nn::Param* out_b_;
};

}  // namespace dialslu

#endif  // DIALSLU_TRANSDUCER_MODEL_H_
