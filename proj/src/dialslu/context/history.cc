// dialslu/context/history.cc

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

#include "dialslu/context/history.h"

#include <algorithm>

#include "dialslu/util/errors.h"

namespace dialslu {

void HistorySpec::validate() const {
  if (use_speaker && !use_history_text && !use_dialog_acts) {
    throw ConfigError(
        "history spec: speaker tokens need history text or dialog acts");
  }
  if (window < 0) throw ConfigError("history spec: negative window");
}

std::string HistorySpec::label() const {
  if (!any_history()) return "none";
  std::string out;
  if (use_speaker) out += "speaker+";
  if (use_history_text) out += "history+";
  if (use_dialog_acts) out += "acts+";
  out.pop_back();
  if (window > 0) out += "@last" + std::to_string(window);
  return out;
}

HistorySpec HistorySpec::from_label(const std::string& label) {
  HistorySpec spec;
  if (label == "none" || label.empty()) return spec;
  std::string body = label;
  const auto at = body.find("@last");
  if (at != std::string::npos) {
    spec.window = std::stoi(body.substr(at + 5));
    body = body.substr(0, at);
  }
  size_t pos = 0;
  while (pos < body.size()) {
    auto next = body.find('+', pos);
    if (next == std::string::npos) next = body.size();
    const std::string part = body.substr(pos, next - pos);
    if (part == "speaker") {
      spec.use_speaker = true;
    } else if (part == "history") {
      spec.use_history_text = true;
    } else if (part == "acts") {
      spec.use_dialog_acts = true;
    } else {
      throw ConfigError("unknown history element: " + part);
    }
    pos = next + 1;
  }
  spec.validate();
  return spec;
}

std::vector<int> build_history_sequence(const Tokenizer& tokenizer,
                                        const Conversation& conversation,
                                        int t, const HistorySpec& spec,
                                        bool include_current, int max_len) {
  spec.validate();
  const int num_turns = static_cast<int>(conversation.turns.size());
  if (t < 1 || t > num_turns) {
    throw IndexError("build_history_sequence: turn index out of range");
  }
  if (max_len < 3) throw ConfigError("history sequence: max_len too small");

  std::vector<int> history;
  const int first =
      spec.window > 0 ? std::max(1, t - spec.window) : 1;
  for (int i = first; i <= t - 1; ++i) {
    const Turn& turn = conversation.turns[i - 1];
    if (spec.use_speaker) history.push_back(tokenizer.role_token(turn.speaker));
    if (spec.use_history_text) {
      const auto words = tokenizer.encode_words(turn.transcript);
      history.insert(history.end(), words.begin(), words.end());
    }
    if (spec.use_dialog_acts) {
      for (DialogAct a : turn.dialog_acts) {
        history.push_back(tokenizer.act_token(a));
      }
    }
  }

  std::vector<int> current;
  if (include_current) {
    current = tokenizer.encode_words(conversation.turns[t - 1].transcript);
  }

  // [CLS] + history + [SEP] (+ current + [SEP])
  int total = 1 + static_cast<int>(history.size()) + 1 +
              (include_current ? static_cast<int>(current.size()) + 1 : 0);
  int overflow = total - max_len;
  if (overflow > 0) {
    const int drop_hist = std::min(overflow, static_cast<int>(history.size()));
    history.erase(history.begin(), history.begin() + drop_hist);
    overflow -= drop_hist;
  }
  if (overflow > 0 && include_current) {
    const int drop_cur = std::min(overflow, static_cast<int>(current.size()));
    current.erase(current.begin(), current.begin() + drop_cur);
  }

  std::vector<int> out;
  out.reserve(static_cast<size_t>(max_len));
  out.push_back(Tokenizer::kCls);
  out.insert(out.end(), history.begin(), history.end());
  out.push_back(Tokenizer::kSep);
  if (include_current) {
    out.insert(out.end(), current.begin(), current.end());
    out.push_back(Tokenizer::kSep);
  }
  return out;
}

}  // namespace dialslu
