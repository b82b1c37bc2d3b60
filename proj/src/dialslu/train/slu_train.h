// dialslu/train/slu_train.h

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

#ifndef DIALSLU_TRAIN_SLU_TRAIN_H_
#define DIALSLU_TRAIN_SLU_TRAIN_H_

#include <string>
#include <vector>

#include "dialslu/eval/report.h"
#include "dialslu/train/dec_histories.h"
#include "dialslu/train/pretrain.h"

namespace dialslu {

// REF/DEC train-test regime for history embeddings. DEC sides need a
// decoded-history cache built from the no-history baseline.
struct RegimeSpec {
  std::string train_source = "ref";  // "ref" | "dec"
  std::string test_source = "ref";
  HistorySpec variant;                // none() for the baseline row
  std::string baseline_checkpoint;    // provenance for DEC decoding

  std::string label() const {
    return variant.any_history() ? train_source + "/" + test_source : "-";
  }
  void validate() const;
};

struct SluTrainResult {
  TransducerModel model;
  std::vector<TrainLogEntry> log;
  double best_valid_loss = 0.0;
};

// Joint ASR+SLU training on serialized targets (transcript characters then
// label tokens) with the one-cycle schedule. train/valid embeddings are
// null for the no-history baseline; otherwise they must cover every
// utterance of their splits. Returns the best-validation-loss snapshot.
SluTrainResult train_slu(TransducerModel model, FeatureStore& store,
                         const SluTask& task,
                         const EmbeddingTable* train_embeddings,
                         const EmbeddingTable* valid_embeddings,
                         const TrainingPlan& plan,
                         const ProgressFn& progress = nullptr);

// Greedy-decodes a split, parses transcripts and labels, and assembles the
// task metrics (aggregate WER, micro act F1 or intent accuracies) plus a
// per-conversation breakdown.
EvalReport evaluate_slu(const TransducerModel& model, FeatureStore& store,
                        Split split, const SluTask& task,
                        const EmbeddingTable* embeddings,
                        bool macro_f1 = false);

// Fingerprints tying reports to their corpus and checkpoint.
std::string corpus_fingerprint(const CorpusManifest& manifest);
std::string params_fingerprint(const nn::ParamSet& params);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_SLU_TRAIN_H_
