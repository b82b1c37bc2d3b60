// dialslu/train/matrix.h

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

#ifndef DIALSLU_TRAIN_MATRIX_H_
#define DIALSLU_TRAIN_MATRIX_H_

#include <functional>
#include <string>
#include <vector>

#include "dialslu/context/train.h"
#include "dialslu/train/slu_train.h"

namespace dialslu {

// Everything one experiment grid needs besides the corpus itself.
struct MatrixConfig {
  TransducerConfig transducer;       // 42-output ASR configuration
  ContextModelConfig context;        // task field is overwritten per run
  ContextTrainSettings context_train;
  TrainingPlan ctc_plan;
  TrainingPlan rnnt_plan;
  TrainingPlan slu_plan;
  uint64_t seed = 0;
  // > 0: decode DEC training histories with per-fold baselines trained on
  // the other folds instead of the single baseline (costly; off by default).
  int dec_heldout_folds = 0;

  // Small-but-trainable defaults for desk runs.
  static MatrixConfig desk_default(uint64_t seed);
};

struct MatrixResult {
  std::vector<EvalReport> reports;
  double asr_valid_wer = 1.0;
  double asr_test_wer = 1.0;
};

using MatrixProgressFn = std::function<void(const std::string&)>;

// Table 4 analogue: D1 baseline, then [HISTORY] embeddings in ref/ref,
// ref/dec and dec/dec regimes.
MatrixResult run_intent_matrix(FeatureStore& store, const MatrixConfig& cfg,
                               const MatrixProgressFn& progress = nullptr);

// Table 3 analogue: C1 baseline plus three embedding variants
// (speaker+acts, speaker+history, speaker+history+acts), each in ref/ref,
// ref/dec and dec/dec regimes. When full=false only the richest variant
// runs (rows C1, C8, C9, C10).
MatrixResult run_dialog_act_matrix(FeatureStore& store,
                                   const MatrixConfig& cfg, bool full = true,
                                   const MatrixProgressFn& progress = nullptr);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_MATRIX_H_
