// dialslu/train/slu_train.cc

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

#include "dialslu/train/slu_train.h"

#include <cmath>

#include "dialslu/eval/metrics.h"
#include "dialslu/util/errors.h"
#include "dialslu/util/strings.h"

namespace dialslu {

void RegimeSpec::validate() const {
  for (const std::string& s : {train_source, test_source}) {
    if (s != "ref" && s != "dec") {
      throw ConfigError("regime source must be 'ref' or 'dec', got " + s);
    }
  }
  if (variant.any_history()) variant.validate();
  if (!variant.any_history() &&
      (train_source == "dec" || test_source == "dec")) {
    throw ConfigError("DEC regime is meaningless without a history variant");
  }
}

namespace {

std::span<const float> embedding_for(const EmbeddingTable* table,
                                     const UtteranceRef& utt) {
  if (table == nullptr) return {};
  const auto it = table->find(embedding_key(utt.conv->id, utt.turn->index));
  if (it == table->end()) {
    throw RegimeError("no history embedding for " + utt.conv->id + " turn " +
                      std::to_string(utt.turn->index));
  }
  return it->second;
}

std::vector<int> slu_target(const UtteranceRef& utt, const SluTask& task) {
  return serialize_target(*utt.turn, utt.conv->intent, task);
}

std::map<std::string, Tensor> snapshot(const nn::ParamSet& params) {
  std::map<std::string, Tensor> out;
  for (const nn::Param* p : params.all()) out.emplace(p->name, p->value);
  return out;
}

}  // namespace

SluTrainResult train_slu(TransducerModel model, FeatureStore& store,
                         const SluTask& task,
                         const EmbeddingTable* train_embeddings,
                         const EmbeddingTable* valid_embeddings,
                         const TrainingPlan& plan, const ProgressFn& progress) {
  if (model.config().num_outputs != kAsrOutputs + task.num_labels()) {
    throw ContractError("train_slu: model output layer does not carry " +
                        std::string(task.name()) + " labels");
  }
  if (model.config().history_dim != 0 && train_embeddings == nullptr) {
    throw RegimeError("train_slu: history-built model without embeddings");
  }
  if (model.config().history_dim == 0 && train_embeddings != nullptr) {
    throw ContractError("train_slu: embeddings supplied to a no-history model");
  }

  const auto train_utts = store.train_utterances();
  const auto valid_utts = store.split_utterances(Split::kValid);
  if (train_utts.empty()) throw EmptyInputError("train_slu: no train data");

  nn::AdamW opt(model.params().all(), {});
  const OneCycleSchedule sched = plan.schedule();
  Rng shuffle_rng = Rng::derive(plan.seed, "slu-shuffle");
  const int steps_per_epoch = std::max<int>(
      1, (static_cast<int>(train_utts.size()) + plan.batch_size - 1) /
             plan.batch_size);

  SluTrainResult result{std::move(model), {}, 1e30};
  TransducerModel& m = result.model;
  std::map<std::string, Tensor> best_params = snapshot(m.params());

  std::vector<int> order(train_utts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= plan.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    double lr = 0.0;
    size_t pos = 0;
    int step = 0;
    while (pos < order.size()) {
      const size_t end = std::min(order.size(), pos + plan.batch_size);
      const float inv = 1.0f / static_cast<float>(end - pos);
      for (size_t i = pos; i < end; ++i) {
        const auto& utt = train_utts[order[i]];
        const Tensor input = m.make_input(
            store.features(utt), embedding_for(train_embeddings, utt));
        nn::Tape tape;
        const auto loss = m.rnnt_nll(tape, input, slu_target(utt, task));
        epoch_loss += tape.scalar(loss);
        tape.backward(tape.scale(loss, inv));
      }
      const double epoch_pos =
          epoch - 1 + static_cast<double>(step) / steps_per_epoch;
      lr = sched.lr(epoch_pos);
      opt.step(static_cast<float>(lr));
      ++step;
      pos = end;
    }
    epoch_loss /= static_cast<double>(train_utts.size());
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("train_slu diverged (non-finite loss) at epoch " +
                         std::to_string(epoch));
    }

    double valid_loss = 0.0;
    for (const auto& utt : valid_utts) {
      const Tensor input = m.make_input(store.features(utt),
                                        embedding_for(valid_embeddings, utt));
      nn::Tape tape;
      valid_loss += tape.scalar(m.rnnt_nll(tape, input, slu_target(utt, task)));
    }
    if (!valid_utts.empty()) valid_loss /= valid_utts.size();

    TrainLogEntry e{"slu", epoch, epoch_loss, lr, valid_loss};
    result.log.push_back(e);
    if (progress) progress(e);
    if (valid_utts.empty() || valid_loss < result.best_valid_loss) {
      result.best_valid_loss = valid_loss;
      best_params = snapshot(m.params());
    }
  }

  for (nn::Param* p : m.params().all()) p->value = best_params.at(p->name);
  return result;
}

EvalReport evaluate_slu(const TransducerModel& model, FeatureStore& store,
                        Split split, const SluTask& task,
                        const EmbeddingTable* embeddings, bool macro_f1) {
  EvalReport report;
  report.task = task.name();

  long long edits = 0, words = 0;
  std::vector<std::set<int>> ref_acts, hyp_acts;
  std::vector<int> ref_intents, hyp_intents;
  std::vector<std::string> conv_ids;

  struct ConvTally {
    std::vector<std::set<int>> ref_acts, hyp_acts;
    long long correct = 0, total = 0;
  };
  std::map<std::string, ConvTally> per_conv;

  for (const auto& utt : store.split_utterances(split)) {
    const auto hyp =
        greedy_decode(model, store.features(utt),
                      embedding_for(embeddings, utt));
    const auto parsed = parse_hypothesis(hyp, task);

    const auto ref_words = split_words(utt.turn->transcript);
    const auto hyp_words = split_words(parsed.transcript);
    edits += edit_distance(ref_words, hyp_words);
    words += static_cast<long long>(ref_words.size());

    ConvTally& tally = per_conv[utt.conv->id];
    if (task.kind == SluTask::Kind::kDialogAct) {
      std::set<int> ref;
      for (DialogAct a : utt.turn->dialog_acts) ref.insert(static_cast<int>(a));
      tally.ref_acts.push_back(ref);
      tally.hyp_acts.push_back(parsed.labels);
      ref_acts.push_back(std::move(ref));
      hyp_acts.push_back(parsed.labels);
    } else {
      const int ref = static_cast<int>(utt.conv->intent);
      const int pred = parsed.labels.empty() ? -1 : *parsed.labels.begin();
      ref_intents.push_back(ref);
      hyp_intents.push_back(pred);
      conv_ids.push_back(utt.conv->id);
      tally.total += 1;
      tally.correct += pred == ref;
    }
  }

  if (words > 0) {
    report.wer = static_cast<double>(edits) / static_cast<double>(words);
  }
  if (task.kind == SluTask::Kind::kDialogAct) {
    report.f1 = dialog_act_f1(ref_acts, hyp_acts, !macro_f1);
    for (auto& [id, tally] : per_conv) {
      report.per_conversation[id] =
          dialog_act_f1(tally.ref_acts, tally.hyp_acts, !macro_f1);
    }
  } else {
    report.intent_acc = intent_accuracy(ref_intents, hyp_intents);
    report.conv_intent_acc =
        conversation_intent_accuracy(conv_ids, ref_intents, hyp_intents);
    for (auto& [id, tally] : per_conv) {
      report.per_conversation[id] =
          static_cast<double>(tally.correct) / tally.total;
    }
  }
  report.corpus_fingerprint = corpus_fingerprint(store.manifest());
  report.checkpoint_fingerprint = params_fingerprint(model.params());
  return report;
}

std::string corpus_fingerprint(const CorpusManifest& manifest) {
  std::string acc = std::to_string(manifest.seed) + "|" + manifest.alphabet;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    acc += manifest.conversations[i].id;
    acc += to_string(manifest.split[i]);
    for (const Turn& t : manifest.conversations[i].turns) {
      acc += t.transcript;
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(acc)));
  return buf;
}

std::string params_fingerprint(const nn::ParamSet& params) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const nn::Param* p : params.all()) {
    h ^= fnv1a64(p->name);
    h *= 0x100000001b3ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(
        p->value.data.data());
    for (size_t i = 0; i < p->value.size() * sizeof(float); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dialslu
