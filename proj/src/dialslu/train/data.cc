// dialslu/train/data.cc

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

#include "dialslu/train/data.h"

#include <cstdio>

#include "dialslu/util/errors.h"

namespace dialslu {

std::string UtteranceRef::key() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", speed);
  return conv->id + "|" + std::to_string(turn->index) + "|" + buf;
}

FeatureStore::FeatureStore(const CorpusManifest& manifest,
                           const std::string& wav_dir, bool augment_train,
                           const LogMelConfig& mel)
    : manifest_(manifest),
      wav_dir_(wav_dir),
      augment_train_(augment_train),
      mel_(mel) {
  // Global stats over the train utterances the models will actually see.
  NormStatsAccumulator acc;
  for (const auto& utt : train_utterances()) {
    acc.add(logmel(load_waveform(utt), mel_));
  }
  stats_ = acc.finalize();
}

std::vector<UtteranceRef> FeatureStore::train_utterances() const {
  std::vector<UtteranceRef> out;
  for (size_t i = 0; i < manifest_.conversations.size(); ++i) {
    if (manifest_.split[i] != Split::kTrain) continue;
    for (const Turn& turn : manifest_.conversations[i].turns) {
      if (augment_train_) {
        for (double f : kSpeedFactors) {
          out.push_back({&manifest_.conversations[i], &turn, f});
        }
      } else {
        out.push_back({&manifest_.conversations[i], &turn, 1.0});
      }
    }
  }
  return out;
}

std::vector<UtteranceRef> FeatureStore::split_utterances(Split split) const {
  std::vector<UtteranceRef> out;
  for (size_t i = 0; i < manifest_.conversations.size(); ++i) {
    if (manifest_.split[i] != split) continue;
    for (const Turn& turn : manifest_.conversations[i].turns) {
      out.push_back({&manifest_.conversations[i], &turn, 1.0});
    }
  }
  return out;
}

Waveform FeatureStore::load_waveform(const UtteranceRef& utt) const {
  Waveform w = read_wav(wav_dir_ + "/" + utt.turn->waveform_ref + ".wav");
  if (utt.speed != 1.0) w = perturb_speed(w, utt.speed);
  return w;
}

const FeatureSequence& FeatureStore::features(const UtteranceRef& utt) {
  const std::string key = utt.key();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  FeatureSequence feats = feature_pipeline(load_waveform(utt), stats_, mel_);
  return cache_.emplace(key, std::move(feats)).first->second;
}

std::vector<int> transcript_to_labels(const std::string& transcript) {
  std::vector<int> out;
  out.reserve(transcript.size());
  for (char c : transcript) {
    const int idx = alphabet_index(c);
    if (idx < 0) throw DomainError("transcript outside the corpus alphabet");
    out.push_back(idx);
  }
  return out;
}

std::string labels_to_transcript(const std::vector<int>& labels) {
  std::string out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l >= 0 && l < kAlphabetSize) out.push_back(kAlphabet[l]);
  }
  return out;
}

}  // namespace dialslu
