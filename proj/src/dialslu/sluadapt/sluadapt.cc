// dialslu/sluadapt/sluadapt.cc

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

#include "dialslu/sluadapt/sluadapt.h"

#include <algorithm>

#include "dialslu/util/errors.h"

namespace dialslu {

std::vector<std::string> SluTask::label_tokens() const {
  std::vector<std::string> out;
  for (int i = 0; i < num_labels(); ++i) out.push_back(label_token(i));
  return out;
}

std::string SluTask::label_token(int index) const {
  if (index < 0 || index >= num_labels()) {
    throw IndexError("label token index out of range");
  }
  if (kind == Kind::kDialogAct) {
    return std::string("<act:") + to_string(static_cast<DialogAct>(index)) +
           ">";
  }
  return std::string("<int:") + to_string(static_cast<Intent>(index)) + ">";
}

SluTask SluTask::from_name(const std::string& name) {
  if (name == "dialog_act") return dialog_act();
  if (name == "intent") return intent();
  throw ConfigError("unknown SLU task: " + name);
}

namespace {

// Copies src into dst for the leading rows/cols both have; anything beyond
// keeps dst's fresh random initialization.
void copy_leading(const Tensor& src, Tensor& dst) {
  const int rows = std::min(src.rows, dst.rows);
  const int cols = std::min(src.cols, dst.cols);
  for (int r = 0; r < rows; ++r) {
    std::copy(src.row(r), src.row(r) + cols, dst.row(r));
  }
}

void copy_params(const TransducerModel& src, TransducerModel& dst) {
  for (nn::Param* p : dst.params().all()) {
    const nn::Param* q = src.params().find(p->name);
    if (q == nullptr) throw ContractError("surgery: missing source param");
    copy_leading(q->value, p->value);
  }
}

}  // namespace

TransducerModel extend_output_layer(const TransducerModel& model,
                                    const SluTask& task, uint64_t seed,
                                    const std::string& source_id) {
  if (model.config().num_outputs != kAsrOutputs) {
    throw ConfigError(
        "output layer already carries SLU tokens; duplicate label tokens");
  }
  TransducerConfig cfg = model.config();
  cfg.num_outputs += task.num_labels();
  TransducerModel out(cfg, seed ^ fnv1a64("extend-output"));
  copy_params(model, out);

  nlohmann::ordered_json prov;
  prov["op"] = "extend_output_layer";
  prov["task"] = task.name();
  prov["added_tokens"] = task.label_tokens();
  prov["source_checkpoint"] = source_id;
  prov["parent"] = model.provenance().empty()
                       ? nlohmann::ordered_json(nullptr)
                       : model.provenance();
  out.provenance() = prov;
  return out;
}

TransducerModel extend_input_layer(const TransducerModel& model,
                                   int extra_dim, uint64_t seed,
                                   const std::string& source_id) {
  if (model.config().history_dim != 0) {
    throw ContractError("input layer already extended for history features");
  }
  TransducerConfig cfg = model.config();
  cfg.history_dim = extra_dim;
  TransducerModel out(cfg, seed ^ fnv1a64("extend-input"));
  copy_params(model, out);

  nlohmann::ordered_json prov;
  prov["op"] = "extend_input_layer";
  prov["extra_dim"] = extra_dim;
  prov["source_checkpoint"] = source_id;
  prov["parent"] = model.provenance().empty()
                       ? nlohmann::ordered_json(nullptr)
                       : model.provenance();
  out.provenance() = prov;
  return out;
}

std::vector<int> serialize_target(const Turn& turn,
                                  std::optional<Intent> intent,
                                  const SluTask& task) {
  std::vector<int> out;
  for (char c : turn.transcript) {
    const int idx = alphabet_index(c);
    if (idx < 0) {
      throw DomainError("serialize_target: transcript not normalized");
    }
    out.push_back(idx);
  }
  if (task.kind == SluTask::Kind::kDialogAct) {
    // std::set iterates in enum order, which is the canonical label order.
    for (DialogAct a : turn.dialog_acts) {
      out.push_back(kSluTokenBase + static_cast<int>(a));
    }
  } else {
    if (!intent.has_value()) {
      throw ContractError("serialize_target: intent task needs an intent");
    }
    out.push_back(kSluTokenBase + static_cast<int>(*intent));
  }
  if (out.empty()) {
    throw EmptyInputError("serialize_target: empty transcript and labels");
  }
  return out;
}

ParsedHypothesis parse_hypothesis(const Hypothesis& hyp, const SluTask& task) {
  ParsedHypothesis parsed;
  int intent_count = 0;
  int last_intent = -1;
  for (int token : hyp.tokens) {
    if (token >= 0 && token < kAlphabetSize) {
      parsed.transcript.push_back(kAlphabet[token]);
    } else if (token >= kSluTokenBase &&
               token < kSluTokenBase + task.num_labels()) {
      const int label = token - kSluTokenBase;
      if (task.kind == SluTask::Kind::kIntent) {
        ++intent_count;
        last_intent = label;
      } else {
        parsed.labels.insert(label);
      }
    }
    // The blank index never appears in a hypothesis; any other id would be
    // outside the model's output range.
  }
  if (task.kind == SluTask::Kind::kIntent) {
    if (last_intent >= 0) parsed.labels.insert(last_intent);
    parsed.multiple_intents = intent_count > 1;
  }
  return parsed;
}

}  // namespace dialslu
