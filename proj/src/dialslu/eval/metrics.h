// dialslu/eval/metrics.h

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

#ifndef DIALSLU_EVAL_METRICS_H_
#define DIALSLU_EVAL_METRICS_H_

#include <set>
#include <string>
#include <vector>

namespace dialslu {

// (substitutions + deletions + insertions) / |reference| by minimum edit
// distance. Throws DomainError on an empty reference.
double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis);

// Word-level edit distance between token sequences.
int edit_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b);

// Multi-label F1 over per-utterance dialog-act sets. Micro averaging pools
// every (utterance, act) decision; macro averages per-act F1 over the label
// universe.
double dialog_act_f1(const std::vector<std::set<int>>& refs,
                     const std::vector<std::set<int>>& hyps,
                     bool micro = true, int num_labels = 16);

// Fraction of utterances whose predicted intent (-1 = none emitted) matches.
double intent_accuracy(const std::vector<int>& refs,
                       const std::vector<int>& hyps);

// Majority vote over each conversation's utterance predictions, scored per
// conversation; ties break toward the lowest (canonical-order) intent index.
double conversation_intent_accuracy(const std::vector<std::string>& conv_ids,
                                    const std::vector<int>& refs,
                                    const std::vector<int>& hyps);

}  // namespace dialslu

#endif  // DIALSLU_EVAL_METRICS_H_
