// dialslu/eval/metrics.cc

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

#include "dialslu/eval/metrics.h"

#include <algorithm>
#include <map>

#include "dialslu/util/errors.h"

namespace dialslu {

int edit_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  // Two-row dynamic program over (prefix of a) x (prefix of b).
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis) {
  if (reference.empty()) {
    throw DomainError("wer: rate undefined for an empty reference");
  }
  return static_cast<double>(edit_distance(reference, hypothesis)) /
         static_cast<double>(reference.size());
}

double dialog_act_f1(const std::vector<std::set<int>>& refs,
                     const std::vector<std::set<int>>& hyps, bool micro,
                     int num_labels) {
  if (refs.size() != hyps.size()) {
    throw AlignmentError("dialog_act_f1: refs and hyps differ in length");
  }
  auto f1_of = [](long long tp, long long fp, long long fn) {
    if (tp == 0) return (fp == 0 && fn == 0) ? 1.0 : 0.0;
    const double p = static_cast<double>(tp) / (tp + fp);
    const double r = static_cast<double>(tp) / (tp + fn);
    return 2.0 * p * r / (p + r);
  };
  if (micro) {
    long long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < refs.size(); ++i) {
      for (int a : hyps[i]) {
        if (refs[i].count(a)) {
          ++tp;
        } else {
          ++fp;
        }
      }
      for (int a : refs[i]) {
        if (!hyps[i].count(a)) ++fn;
      }
    }
    return f1_of(tp, fp, fn);
  }
  double total = 0.0;
  for (int label = 0; label < num_labels; ++label) {
    long long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < refs.size(); ++i) {
      const bool in_ref = refs[i].count(label) != 0;
      const bool in_hyp = hyps[i].count(label) != 0;
      tp += in_ref && in_hyp;
      fp += !in_ref && in_hyp;
      fn += in_ref && !in_hyp;
    }
    total += f1_of(tp, fp, fn);
  }
  return total / num_labels;
}

double intent_accuracy(const std::vector<int>& refs,
                       const std::vector<int>& hyps) {
  if (refs.size() != hyps.size()) {
    throw AlignmentError("intent_accuracy: refs and hyps differ in length");
  }
  if (refs.empty()) throw EmptyInputError("intent_accuracy: no utterances");
  long long correct = 0;
  for (size_t i = 0; i < refs.size(); ++i) {
    // An utterance with no emitted intent (hyp -1) counts as incorrect.
    correct += hyps[i] >= 0 && hyps[i] == refs[i];
  }
  return static_cast<double>(correct) / static_cast<double>(refs.size());
}

double conversation_intent_accuracy(const std::vector<std::string>& conv_ids,
                                    const std::vector<int>& refs,
                                    const std::vector<int>& hyps) {
  if (conv_ids.size() != refs.size() || refs.size() != hyps.size()) {
    throw AlignmentError("conversation accuracy: misaligned inputs");
  }
  if (refs.empty()) throw EmptyInputError("conversation accuracy: empty");
  struct Tally {
    int ref = -1;
    std::map<int, int> votes;
  };
  std::map<std::string, Tally> by_conv;
  for (size_t i = 0; i < refs.size(); ++i) {
    Tally& t = by_conv[conv_ids[i]];
    t.ref = refs[i];
    if (hyps[i] >= 0) t.votes[hyps[i]]++;
  }
  long long correct = 0;
  for (const auto& [id, t] : by_conv) {
    int best = -1, best_votes = 0;
    // std::map iterates in ascending label order, so ties keep the lowest
    // (canonical) intent.
    for (const auto& [label, votes] : t.votes) {
      if (votes > best_votes) {
        best = label;
        best_votes = votes;
      }
    }
    correct += best == t.ref;
  }
  return static_cast<double>(correct) / static_cast<double>(by_conv.size());
}

}  // namespace dialslu
