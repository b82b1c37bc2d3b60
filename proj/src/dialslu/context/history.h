// dialslu/context/history.h

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

#ifndef DIALSLU_CONTEXT_HISTORY_H_
#define DIALSLU_CONTEXT_HISTORY_H_

#include <string>
#include <vector>

#include "dialslu/context/tokenizer.h"
#include "dialslu/corpus/types.h"

namespace dialslu {

// Which dialog-history elements feed the context encoder, and how far back.
struct HistorySpec {
  bool use_speaker = false;
  bool use_history_text = false;
  bool use_dialog_acts = false;
  int window = 0;  // 0 = full history, k > 0 = last k utterances

  static HistorySpec none() { return {}; }
  static HistorySpec speaker_history() { return {true, true, false, 0}; }
  static HistorySpec speaker_acts() { return {true, false, true, 0}; }
  static HistorySpec speaker_history_acts() { return {true, true, true, 0}; }
  static HistorySpec history_only() { return {false, true, false, 0}; }

  bool any_history() const {
    return use_speaker || use_history_text || use_dialog_acts;
  }
  void validate() const;
  std::string label() const;
  static HistorySpec from_label(const std::string& label);
};

// Token sequence for turn t of a conversation:
//   [CLS] <history of turns 1..t-1> [SEP]                 (embedding form)
//   [CLS] <history> [SEP] <current utterance> [SEP]       (training form)
// Each history turn renders its role token (use_speaker), transcript words
// (use_history_text) and act tokens in canonical order (use_dialog_acts).
// When the sequence exceeds max_len, the oldest history tokens go first,
// then the oldest current-utterance tokens; [CLS] is never dropped.
std::vector<int> build_history_sequence(const Tokenizer& tokenizer,
                                        const Conversation& conversation,
                                        int t, const HistorySpec& spec,
                                        bool include_current, int max_len);

}  // namespace dialslu

#endif  // DIALSLU_CONTEXT_HISTORY_H_
