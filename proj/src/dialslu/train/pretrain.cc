// dialslu/train/pretrain.cc

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

#include "dialslu/train/pretrain.h"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dialslu/eval/metrics.h"
#include "dialslu/sluadapt/sluadapt.h"
#include "dialslu/util/errors.h"
#include "dialslu/util/strings.h"

namespace dialslu {

void write_train_log(const std::string& path,
                     const std::vector<TrainLogEntry>& log) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (const auto& e : log) {
    nlohmann::ordered_json j;
    j["stage"] = e.stage;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["lr"] = e.lr;
    j["valid_metric"] = e.valid_metric;
    os << j.dump() << "\n";
  }
}

namespace {

void check_finite(double loss, const std::string& stage, int epoch) {
  if (!std::isfinite(loss)) {
    throw NumericError("training diverged (non-finite loss) in stage " +
                       stage + " at epoch " + std::to_string(epoch));
  }
}

std::map<std::string, Tensor> snapshot(const nn::ParamSet& params) {
  std::map<std::string, Tensor> out;
  for (const nn::Param* p : params.all()) out.emplace(p->name, p->value);
  return out;
}

void restore(const std::map<std::string, Tensor>& snap, nn::ParamSet& params) {
  for (nn::Param* p : params.all()) p->value = snap.at(p->name);
}

}  // namespace

double split_wer(const TransducerModel& model, FeatureStore& store,
                 Split split) {
  long long edits = 0, words = 0;
  for (const auto& utt : store.split_utterances(split)) {
    const auto hyp = greedy_decode(model, store.features(utt));
    std::string text;
    for (int tok : hyp.tokens) {
      if (tok >= 0 && tok < kAlphabetSize) text.push_back(kAlphabet[tok]);
    }
    const auto ref_words = split_words(utt.turn->transcript);
    const auto hyp_words = split_words(text);
    edits += edit_distance(ref_words, hyp_words);
    words += static_cast<long long>(ref_words.size());
  }
  if (words == 0) throw EmptyInputError("split_wer: no reference words");
  return static_cast<double>(edits) / static_cast<double>(words);
}

PretrainResult pretrain_asr(FeatureStore& store, const TransducerConfig& cfg,
                            const TrainingPlan& ctc_plan,
                            const TrainingPlan& rnnt_plan, bool ctc_init,
                            const ProgressFn& progress) {
  if (cfg.num_outputs != kAsrOutputs) {
    throw ConfigError("pretrain_asr expects the 42-output ASR configuration");
  }
  auto train_utts = store.train_utterances();
  if (train_utts.empty()) throw EmptyInputError("pretrain: no train data");
  const auto valid_utts = store.split_utterances(Split::kValid);

  std::vector<TrainLogEntry> log;

  // Stage 1: frame-level CTC to initialize the transcription network.
  std::map<std::string, Tensor> best_ctc;
  if (ctc_init) {
    CtcModel ctc(cfg, ctc_plan.seed);
    nn::AdamW opt(ctc.params().all(), {});
    const OneCycleSchedule sched = ctc_plan.schedule();
    Rng shuffle_rng = Rng::derive(ctc_plan.seed, "ctc-shuffle");
    const int steps_per_epoch = std::max<int>(
        1, (static_cast<int>(train_utts.size()) + ctc_plan.batch_size - 1) /
               ctc_plan.batch_size);
    double best_valid = 1e30;
    std::vector<int> order(train_utts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int epoch = 1; epoch <= ctc_plan.epochs; ++epoch) {
      shuffle_rng.shuffle(order);
      double epoch_loss = 0.0;
      double lr = 0.0;
      size_t pos = 0;
      int step = 0;
      while (pos < order.size()) {
        const size_t end = std::min(order.size(),
                                    pos + ctc_plan.batch_size);
        const float inv = 1.0f / static_cast<float>(end - pos);
        for (size_t i = pos; i < end; ++i) {
          const auto& utt = train_utts[order[i]];
          nn::Tape tape;
          const auto loss = ctc.ctc_nll(
              tape, store.features(utt).frames,
              transcript_to_labels(utt.turn->transcript));
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
      check_finite(epoch_loss, "ctc-pretrain", epoch);

      double valid_loss = 0.0;
      for (const auto& utt : valid_utts) {
        nn::Tape tape;
        valid_loss += tape.scalar(
            ctc.ctc_nll(tape, store.features(utt).frames,
                        transcript_to_labels(utt.turn->transcript)));
      }
      if (!valid_utts.empty()) valid_loss /= valid_utts.size();
      TrainLogEntry e{"ctc-pretrain", epoch, epoch_loss, lr, valid_loss};
      log.push_back(e);
      if (progress) progress(e);
      if (valid_utts.empty() || valid_loss < best_valid) {
        best_valid = valid_loss;
        best_ctc = snapshot(ctc.params());
      }
    }
  }

  // Stage 2: the full transducer, encoder initialized from stage 1.
  PretrainResult result{TransducerModel(cfg, rnnt_plan.seed), {}, 1e30, 0};
  TransducerModel& model = result.model;
  if (ctc_init) {
    for (nn::Param* p : model.params().all()) {
      const auto it = best_ctc.find(p->name);
      if (it != best_ctc.end()) p->value = it->second;
    }
    model.provenance()["encoder_init"] = "ctc";
  } else {
    model.provenance()["encoder_init"] = "random";
  }

  nn::AdamW opt(model.params().all(), {});
  const OneCycleSchedule sched = rnnt_plan.schedule();
  Rng shuffle_rng = Rng::derive(rnnt_plan.seed, "rnnt-shuffle");
  const int steps_per_epoch = std::max<int>(
      1, (static_cast<int>(train_utts.size()) + rnnt_plan.batch_size - 1) /
             rnnt_plan.batch_size);
  std::map<std::string, Tensor> best_params = snapshot(model.params());
  std::vector<int> order(train_utts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= rnnt_plan.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    double lr = 0.0;
    size_t pos = 0;
    int step = 0;
    while (pos < order.size()) {
      const size_t end = std::min(order.size(), pos + rnnt_plan.batch_size);
      const float inv = 1.0f / static_cast<float>(end - pos);
      for (size_t i = pos; i < end; ++i) {
        const auto& utt = train_utts[order[i]];
        const Tensor input = model.make_input(store.features(utt), {});
        nn::Tape tape;
        const auto loss = model.rnnt_nll(
            tape, input, transcript_to_labels(utt.turn->transcript));
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
    check_finite(epoch_loss, "asr-rnnt", epoch);

    const double valid_wer =
        valid_utts.empty() ? 0.0 : split_wer(model, store, Split::kValid);
    TrainLogEntry e{"asr-rnnt", epoch, epoch_loss, lr, valid_wer};
    log.push_back(e);
    if (progress) progress(e);
    if (valid_utts.empty() || valid_wer < result.best_valid_wer) {
      result.best_valid_wer = valid_wer;
      result.best_epoch = epoch;
      best_params = snapshot(model.params());
    }
  }

  restore(best_params, model.params());
  result.log = std::move(log);
  return result;
}

}  // namespace dialslu
