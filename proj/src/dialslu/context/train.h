// dialslu/context/train.h

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

#ifndef DIALSLU_CONTEXT_TRAIN_H_
#define DIALSLU_CONTEXT_TRAIN_H_

#include <functional>
#include <string>
#include <vector>

#include "dialslu/context/model.h"

namespace dialslu {

struct ContextTrainSettings {
  int epochs = 20;
  int batch_size = 32;
  float learning_rate = 2e-5f;
  uint64_t seed = 0;
};

struct ContextEpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_metric = 0.0;  // intent accuracy or act micro-F1
};

struct ContextTrainResult {
  ContextModel model;
  std::vector<ContextEpochLog> log;
  double best_valid_metric = 0.0;
};

// Trains an intent or dialog-act classifier on the train split (sequences in
// the [CLS] c [SEP] u_t [SEP] form) and returns the epoch snapshot with the
// best validation metric.
ContextTrainResult train_context_model(
    const CorpusManifest& manifest, const std::string& task,
    const HistorySpec& spec, const ContextTrainSettings& settings,
    const ContextModelConfig& base_config = {},
    const std::function<void(const ContextEpochLog&)>& on_epoch = nullptr);

// Per-utterance intent accuracy / act micro-F1 of a trained classifier on
// one split, with sequences built the same way as in training.
double evaluate_context_model(const ContextModel& model,
                              const CorpusManifest& manifest, Split split,
                              const HistorySpec& spec);

// Writes per-utterance embedding records (conversation id, turn index,
// 128 floats) for every turn of every conversation in the split.
void export_embeddings(const ContextModel& model,
                       const CorpusManifest& manifest, Split split,
                       const HistorySpec& spec, const std::string& path);

}  // namespace dialslu

#endif  // DIALSLU_CONTEXT_TRAIN_H_
