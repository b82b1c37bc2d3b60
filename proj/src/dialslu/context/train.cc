// dialslu/context/train.cc

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

#include "dialslu/context/train.h"

#include <cmath>
#include <fstream>

#include "dialslu/eval/metrics.h"
#include "dialslu/util/errors.h"

namespace dialslu {

namespace {

struct Example {
  int conv = 0;  // index into manifest.conversations
  int t = 0;     // 1-based turn
};

std::vector<Example> collect_examples(const CorpusManifest& manifest,
                                      Split split) {
  std::vector<Example> out;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != split) continue;
    const auto& conv = manifest.conversations[i];
    for (size_t t = 1; t <= conv.turns.size(); ++t) {
      out.push_back({static_cast<int>(i), static_cast<int>(t)});
    }
  }
  return out;
}

std::vector<float> act_targets(const Turn& turn) {
  std::vector<float> target(kNumDialogActs, 0.0f);
  for (DialogAct a : turn.dialog_acts) target[static_cast<int>(a)] = 1.0f;
  return target;
}

double metric_for(const ContextModel& model, const CorpusManifest& manifest,
                  const std::vector<Example>& examples,
                  const HistorySpec& spec) {
  const bool intent = model.config().task == "intent";
  std::vector<int> ref_intents, hyp_intents;
  std::vector<std::set<int>> ref_acts, hyp_acts;
  for (const Example& ex : examples) {
    const auto& conv = manifest.conversations[ex.conv];
    const auto ids =
        build_history_sequence(model.tokenizer(), conv, ex.t, spec,
                               /*include_current=*/true,
                               model.config().max_len);
    const auto probs = model.classify(ids);
    if (intent) {
      int best = 0;
      for (int c = 1; c < static_cast<int>(probs.size()); ++c) {
        if (probs[c] > probs[best]) best = c;
      }
      hyp_intents.push_back(best);
      ref_intents.push_back(static_cast<int>(conv.intent));
    } else {
      std::set<int> pred;
      for (int c = 0; c < static_cast<int>(probs.size()); ++c) {
        if (probs[c] > 0.5f) pred.insert(c);
      }
      hyp_acts.push_back(std::move(pred));
      std::set<int> ref;
      for (DialogAct a : conv.turns[ex.t - 1].dialog_acts) {
        ref.insert(static_cast<int>(a));
      }
      ref_acts.push_back(std::move(ref));
    }
  }
  return intent ? intent_accuracy(ref_intents, hyp_intents)
                : dialog_act_f1(ref_acts, hyp_acts);
}

}  // namespace

ContextTrainResult train_context_model(
    const CorpusManifest& manifest, const std::string& task,
    const HistorySpec& spec, const ContextTrainSettings& settings,
    const ContextModelConfig& base_config,
    const std::function<void(const ContextEpochLog&)>& on_epoch) {
  if (task != "intent" && task != "dialog_act") {
    throw ConfigError("context training: unknown task " + task);
  }
  spec.validate();

  ContextModelConfig cfg = base_config;
  cfg.task = task;
  Tokenizer tokenizer = Tokenizer::build(manifest);

  ContextTrainResult result{
      ContextModel(cfg, std::move(tokenizer), settings.seed), {}, 0.0};
  ContextModel& model = result.model;

  const auto train_examples = collect_examples(manifest, Split::kTrain);
  const auto valid_examples = collect_examples(manifest, Split::kValid);
  if (train_examples.empty()) {
    throw EmptyInputError("context training: no training utterances");
  }

  nn::AdamWConfig opt_cfg;
  nn::AdamW opt(model.params().all(), opt_cfg);
  Rng shuffle_rng = Rng::derive(settings.seed, "context-shuffle");

  std::map<std::string, Tensor> best_params;
  double best_metric = -1.0;

  std::vector<int> order(train_examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= settings.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    size_t pos = 0;
    while (pos < order.size()) {
      const size_t batch_end =
          std::min(order.size(), pos + settings.batch_size);
      const float inv = 1.0f / static_cast<float>(batch_end - pos);
      for (size_t i = pos; i < batch_end; ++i) {
        const Example& ex = train_examples[order[i]];
        const auto& conv = manifest.conversations[ex.conv];
        const auto ids = build_history_sequence(model.tokenizer(), conv, ex.t,
                                                spec, /*include_current=*/true,
                                                cfg.max_len);
        nn::Tape tape;
        const auto fwd = model.forward(tape, ids);
        nn::Tape::Var loss;
        if (task == "intent") {
          loss = tape.softmax_cross_entropy(fwd.logits,
                                            static_cast<int>(conv.intent));
        } else {
          loss = tape.sigmoid_cross_entropy(fwd.logits,
                                            act_targets(conv.turns[ex.t - 1]));
        }
        epoch_loss += tape.scalar(loss);
        tape.backward(tape.scale(loss, inv));
      }
      opt.step(settings.learning_rate);
      pos = batch_end;
    }

    ContextEpochLog log;
    log.epoch = epoch;
    log.train_loss = epoch_loss / static_cast<double>(train_examples.size());
    log.valid_metric = valid_examples.empty()
                           ? 0.0
                           : metric_for(model, manifest, valid_examples, spec);
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);

    if (log.valid_metric > best_metric) {
      best_metric = log.valid_metric;
      best_params.clear();
      for (const nn::Param* p : model.params().all()) {
        best_params.emplace(p->name, p->value);
      }
    }
  }

  if (!best_params.empty()) {
    for (nn::Param* p : model.params().all()) {
      p->value = best_params.at(p->name);
    }
  }
  result.best_valid_metric = best_metric;
  return result;
}

double evaluate_context_model(const ContextModel& model,
                              const CorpusManifest& manifest, Split split,
                              const HistorySpec& spec) {
  const auto examples = collect_examples(manifest, split);
  if (examples.empty()) throw EmptyInputError("context eval: empty split");
  return metric_for(model, manifest, examples, spec);
}

void export_embeddings(const ContextModel& model,
                       const CorpusManifest& manifest, Split split,
                       const HistorySpec& spec, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != split) continue;
    const auto& conv = manifest.conversations[i];
    for (size_t t = 1; t <= conv.turns.size(); ++t) {
      const auto emb =
          model.embed_context(conv, static_cast<int>(t), spec);
      nlohmann::ordered_json j;
      j["conversation_id"] = conv.id;
      j["turn_index"] = t;
      j["embedding"] = emb.values;
      os << j.dump() << "\n";
    }
  }
  if (!os) throw IoError("short write: " + path);
}

}  // namespace dialslu
