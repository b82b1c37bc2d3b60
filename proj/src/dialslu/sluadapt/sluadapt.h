// dialslu/sluadapt/sluadapt.h

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

#ifndef DIALSLU_SLUADAPT_SLUADAPT_H_
#define DIALSLU_SLUADAPT_SLUADAPT_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialslu/corpus/types.h"
#include "dialslu/transducer/model.h"

namespace dialslu {

// An SLU task adds its label tokens to the transducer output space, after
// the 41 characters and the blank.
struct SluTask {
  enum class Kind { kDialogAct, kIntent };
  Kind kind = Kind::kDialogAct;

  static SluTask dialog_act() { return {Kind::kDialogAct}; }
  static SluTask intent() { return {Kind::kIntent}; }

  int num_labels() const {
    return kind == Kind::kDialogAct ? kNumDialogActs : kNumIntents;
  }
  const char* name() const {
    return kind == Kind::kDialogAct ? "dialog_act" : "intent";
  }
  // Canonical-order label tokens, e.g. "<act:greeting>" / "<int:pay_bill>".
  std::vector<std::string> label_tokens() const;
  std::string label_token(int index) const;

  static SluTask from_name(const std::string& name);
};

// Output-layer surgery: the joint output projection and the prediction
// network's input embedding gain one row per label token, randomly
// initialized; everything else is copied bit-exactly, so logits over the
// original outputs are unchanged.
TransducerModel extend_output_layer(const TransducerModel& model,
                                    const SluTask& task, uint64_t seed,
                                    const std::string& source_id = "");

// Input-layer surgery: the first encoder layer gains extra_dim input
// columns, randomly initialized; with a zero history vector the forward
// pass matches the pre-surgery model.
TransducerModel extend_input_layer(const TransducerModel& model,
                                   int extra_dim, uint64_t seed,
                                   const std::string& source_id = "");

// Target serialization: transcript characters, then the utterance's SLU
// label tokens (acts in canonical order, or the single intent token).
std::vector<int> serialize_target(const Turn& turn,
                                  std::optional<Intent> intent,
                                  const SluTask& task);

struct ParsedHypothesis {
  std::string transcript;
  std::set<int> labels;  // task-local label indices
  // Intent task only: more than one intent token was emitted (the last one
  // wins and is reported in labels).
  bool multiple_intents = false;
};

// Partitions emitted tokens into characters and label tokens. Total:
// malformed interleavings still parse.
ParsedHypothesis parse_hypothesis(const Hypothesis& hyp, const SluTask& task);

}  // namespace dialslu

#endif  // DIALSLU_SLUADAPT_SLUADAPT_H_
