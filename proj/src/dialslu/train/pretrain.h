// dialslu/train/pretrain.h

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

#ifndef DIALSLU_TRAIN_PRETRAIN_H_
#define DIALSLU_TRAIN_PRETRAIN_H_

#include <functional>
#include <string>
#include <vector>

#include "dialslu/train/data.h"
#include "dialslu/train/schedule.h"
#include "dialslu/transducer/model.h"

namespace dialslu {

struct TrainingPlan {
  int epochs = 20;
  int batch_size = 16;
  double max_lr = 2e-4;
  uint64_t seed = 0;

  // The reference-scale SLU plan: 20 epochs, batch 16, peak 2e-4.
  static TrainingPlan reference_slu() { return {}; }

  OneCycleSchedule schedule() const {
    return OneCycleSchedule::scaled(epochs, max_lr);
  }
};

struct TrainLogEntry {
  std::string stage;
  int epoch = 0;
  double train_loss = 0.0;
  double lr = 0.0;
  double valid_metric = 0.0;  // loss or WER depending on the stage
};

void write_train_log(const std::string& path,
                     const std::vector<TrainLogEntry>& log);

struct PretrainResult {
  TransducerModel model;
  std::vector<TrainLogEntry> log;  // ctc entries then rnnt entries
  double best_valid_wer = 1.0;
  int best_epoch = 0;
};

using ProgressFn = std::function<void(const TrainLogEntry&)>;

// Stage 1 trains a CTC model over characters to initialize the encoder;
// stage 2 trains the full transducer, returning the epoch snapshot with the
// best validation WER. Set ctc_init=false to skip stage 1 (random encoder).
// Throws NumericError if a stage diverges to a non-finite loss.
PretrainResult pretrain_asr(FeatureStore& store, const TransducerConfig& cfg,
                            const TrainingPlan& ctc_plan,
                            const TrainingPlan& rnnt_plan,
                            bool ctc_init = true,
                            const ProgressFn& progress = nullptr);

// Greedy-decodes a split and returns the aggregate word error rate
// (total edits / total reference words).
double split_wer(const TransducerModel& model, FeatureStore& store,
                 Split split);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_PRETRAIN_H_
