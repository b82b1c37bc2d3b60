// dialslu/train/dec_histories.cc

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

#include "dialslu/train/dec_histories.h"

#include <fstream>

#include <json.hpp>

#include "dialslu/util/errors.h"
#include "dialslu/util/strings.h"

namespace dialslu {

void DecodedHistoryCache::put(const std::string& conv_id, int turn,
                              DecodedTurn decoded) {
  entries_[{conv_id, turn}] = std::move(decoded);
}

const DecodedTurn* DecodedHistoryCache::find(const std::string& conv_id,
                                             int turn) const {
  const auto it = entries_.find({conv_id, turn});
  return it == entries_.end() ? nullptr : &it->second;
}

const DecodedTurn& DecodedHistoryCache::at(const std::string& conv_id,
                                           int turn) const {
  const DecodedTurn* d = find(conv_id, turn);
  if (d == nullptr) {
    throw RegimeError("decoded-history cache is missing " + conv_id +
                      " turn " + std::to_string(turn));
  }
  return *d;
}

void DecodedHistoryCache::save(const std::string& path,
                               const SluTask& task) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (const auto& [key, decoded] : entries_) {
    nlohmann::ordered_json j;
    j["conversation_id"] = key.first;
    j["turn_index"] = key.second;
    j["transcript"] = decoded.transcript;
    j["labels"] = nlohmann::ordered_json::array();
    for (int label : decoded.labels) {
      j["labels"].push_back(task.label_token(label));
    }
    os << j.dump() << "\n";
  }
  if (!os) throw IoError("short write: " + path);
}

DecodedHistoryCache DecodedHistoryCache::load(const std::string& path,
                                              const SluTask& task) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::map<std::string, int> token_to_label;
  for (int i = 0; i < task.num_labels(); ++i) {
    token_to_label[task.label_token(i)] = i;
  }
  DecodedHistoryCache cache;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto j = nlohmann::ordered_json::parse(line);
    DecodedTurn decoded;
    decoded.transcript = j.at("transcript").get<std::string>();
    for (const auto& token : j.at("labels")) {
      decoded.labels.insert(token_to_label.at(token.get<std::string>()));
    }
    cache.put(j.at("conversation_id").get<std::string>(),
              j.at("turn_index").get<int>(), std::move(decoded));
  }
  return cache;
}

DecodedHistoryCache build_decoded_histories(const UtteranceDecodeFn& decoder,
                                            const CorpusManifest& manifest,
                                            Split split, const SluTask& task) {
  (void)task;
  DecodedHistoryCache cache;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != split) continue;
    const Conversation& conv = manifest.conversations[i];
    for (const Turn& turn : conv.turns) {
      const ParsedHypothesis parsed = decoder(conv, turn);
      DecodedTurn decoded;
      decoded.transcript = normalize_transcript(parsed.transcript);
      decoded.labels = parsed.labels;
      cache.put(conv.id, turn.index, std::move(decoded));
    }
  }
  return cache;
}

UtteranceDecodeFn greedy_transducer_decoder(const TransducerModel& baseline,
                                            FeatureStore& store,
                                            const SluTask& task) {
  if (baseline.config().history_dim != 0) {
    throw ContractError("the decoding baseline must be a no-history model");
  }
  return [&baseline, &store, task](const Conversation& conv,
                                   const Turn& turn) {
    UtteranceRef utt{&conv, &turn, 1.0};
    const auto hyp = greedy_decode(baseline, store.features(utt));
    return parse_hypothesis(hyp, task);
  };
}

UtteranceDecodeFn oracle_reference_decoder(const SluTask& task) {
  return [task](const Conversation& conv, const Turn& turn) {
    ParsedHypothesis parsed;
    parsed.transcript = turn.transcript;
    if (task.kind == SluTask::Kind::kDialogAct) {
      for (DialogAct a : turn.dialog_acts) {
        parsed.labels.insert(static_cast<int>(a));
      }
    } else {
      parsed.labels.insert(static_cast<int>(conv.intent));
    }
    return parsed;
  };
}

HistorySource HistorySource::dec(const DecodedHistoryCache* cache) {
  if (cache == nullptr) {
    throw RegimeError("DEC history source requires a decoded cache");
  }
  return HistorySource(cache);
}

Conversation HistorySource::prefix(const Conversation& conv, int t,
                                   const SluTask& task) const {
  Conversation out;
  out.id = conv.id;
  out.intent = conv.intent;
  out.caller_id = conv.caller_id;
  out.agent_id = conv.agent_id;
  for (int i = 1; i < t; ++i) {
    const Turn& src = conv.turns[i - 1];
    Turn turn;
    turn.index = i;
    turn.speaker = src.speaker;
    if (cache_ == nullptr) {
      turn.transcript = src.transcript;
      turn.dialog_acts = src.dialog_acts;
    } else {
      const DecodedTurn& decoded = cache_->at(conv.id, i);
      turn.transcript = decoded.transcript;
      if (task.kind == SluTask::Kind::kDialogAct) {
        for (int label : decoded.labels) {
          turn.dialog_acts.insert(static_cast<DialogAct>(label));
        }
      }
      // Intent-task caches carry intent labels, which never render as
      // history act tokens.
    }
    out.turns.push_back(std::move(turn));
  }
  // The current turn itself: embedding extraction never reads it, but the
  // prefix must contain t turns for build_history_sequence's index check.
  Turn current;
  current.index = t;
  current.speaker = conv.turns[t - 1].speaker;
  out.turns.push_back(std::move(current));
  return out;
}

std::string embedding_key(const std::string& conv_id, int turn) {
  return conv_id + "|" + std::to_string(turn);
}

EmbeddingTable build_embeddings(const ContextModel& model,
                                const CorpusManifest& manifest, Split split,
                                const HistorySource& source,
                                const HistorySpec& spec, const SluTask& task) {
  EmbeddingTable table;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != split) continue;
    const Conversation& conv = manifest.conversations[i];
    for (const Turn& turn : conv.turns) {
      const Conversation prefix = source.prefix(conv, turn.index, task);
      const auto emb = model.embed_context(prefix, turn.index, spec);
      table.emplace(embedding_key(conv.id, turn.index), emb.values);
    }
  }
  return table;
}

}  // namespace dialslu
