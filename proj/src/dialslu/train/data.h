// dialslu/train/data.h

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

#ifndef DIALSLU_TRAIN_DATA_H_
#define DIALSLU_TRAIN_DATA_H_

#include <map>
#include <string>
#include <vector>

#include "dialslu/corpus/corpus.h"
#include "dialslu/features/features.h"

namespace dialslu {

// One training or evaluation utterance: a turn at a speed factor.
struct UtteranceRef {
  const Conversation* conv = nullptr;
  const Turn* turn = nullptr;
  double speed = 1.0;

  std::string key() const;
};

// Loads turn waveforms from the corpus wav directory, applies speed
// perturbation for the train split, computes the global normalization stats
// over the (augmented) train utterances, and serves final 240-dim feature
// sequences with caching. All access is deterministic.
class FeatureStore {
 public:
  FeatureStore(const CorpusManifest& manifest, const std::string& wav_dir,
               bool augment_train = true, const LogMelConfig& mel = {});

  const NormStats& stats() const { return stats_; }
  const CorpusManifest& manifest() const { return manifest_; }
  const std::string& wav_dir() const { return wav_dir_; }

  // Train utterances (augmented when enabled), or a split's plain
  // utterances at speed 1.0, in manifest order.
  std::vector<UtteranceRef> train_utterances() const;
  std::vector<UtteranceRef> split_utterances(Split split) const;

  const FeatureSequence& features(const UtteranceRef& utt);

 private:
  Waveform load_waveform(const UtteranceRef& utt) const;

  const CorpusManifest& manifest_;
  std::string wav_dir_;
  bool augment_train_;
  LogMelConfig mel_;
  NormStats stats_;
  std::map<std::string, FeatureSequence> cache_;
};

// Characters of a normalized transcript as transducer output indices.
std::vector<int> transcript_to_labels(const std::string& transcript);
std::string labels_to_transcript(const std::vector<int>& labels);

}  // namespace dialslu

#endif  // DIALSLU_TRAIN_DATA_H_
