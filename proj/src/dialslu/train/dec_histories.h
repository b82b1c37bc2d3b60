// dialslu/train/dec_histories.h

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

#ifndef DIALSLU_TRAIN_DEC_HISTORIES_H_
#define DIALSLU_TRAIN_DEC_HISTORIES_H_

#include <functional>
#include <map>
#include <set>
#include <string>

#include "dialslu/context/model.h"
#include "dialslu/sluadapt/sluadapt.h"
#include "dialslu/train/data.h"

namespace dialslu {

struct DecodedTurn {
  std::string transcript;
  std::set<int> labels;  // task-local label indices
};

// Decoded transcripts and SLU labels keyed by (conversation id, turn index).
class DecodedHistoryCache {
 public:
  void put(const std::string& conv_id, int turn, DecodedTurn decoded);
  const DecodedTurn* find(const std::string& conv_id, int turn) const;
  const DecodedTurn& at(const std::string& conv_id, int turn) const;
  size_t size() const { return entries_.size(); }

  void save(const std::string& path, const SluTask& task) const;
  static DecodedHistoryCache load(const std::string& path,
                                  const SluTask& task);

 private:
  std::map<std::pair<std::string, int>, DecodedTurn> entries_;
};

using UtteranceDecodeFn =
    std::function<ParsedHypothesis(const Conversation&, const Turn&)>;

// Decodes every utterance of the split in conversation order and stores the
// parsed transcript and labels. Histories for turn t reference decoded turns
// 1..t-1 only, by construction.
DecodedHistoryCache build_decoded_histories(const UtteranceDecodeFn& decoder,
                                            const CorpusManifest& manifest,
                                            Split split, const SluTask& task);

// The production decoder: greedy decoding with the no-history baseline.
UtteranceDecodeFn greedy_transducer_decoder(const TransducerModel& baseline,
                                            FeatureStore& store,
                                            const SluTask& task);

// Returns references verbatim; substituting it for the baseline makes DEC
// caches equal REF exactly.
UtteranceDecodeFn oracle_reference_decoder(const SluTask& task);

// Where history embeddings read previous-turn transcripts and acts from:
// ground truth (REF) or a decoded-history cache (DEC).
class HistorySource {
 public:
  static HistorySource ref() { return HistorySource(nullptr); }
  static HistorySource dec(const DecodedHistoryCache* cache);

  bool is_dec() const { return cache_ != nullptr; }

  // The conversation prefix visible at turn t: turns 1..t-1 carrying this
  // source's transcripts and acts (speaker roles always come from the
  // manifest). The turn t itself is never read.
  Conversation prefix(const Conversation& conv, int t,
                      const SluTask& task) const;

 private:
  explicit HistorySource(const DecodedHistoryCache* cache) : cache_(cache) {}
  const DecodedHistoryCache* cache_;
};

// Embeddings for every (conversation, turn) of a split, keyed "convid|turn".
using EmbeddingTable = std::map<std::string, std::vector<float>>;

EmbeddingTable build_embeddings(const ContextModel& model,
                                const CorpusManifest& manifest, Split split,
                                const HistorySource& source,
                                const HistorySpec& spec, const SluTask& task);

std::string embedding_key(const std::string& conv_id, int turn);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_DEC_HISTORIES_H_
