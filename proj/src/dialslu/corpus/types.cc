// dialslu/corpus/types.cc

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

#include "dialslu/corpus/types.h"

#include <cstring>

#include "dialslu/util/errors.h"

namespace dialslu {

// 26 letters + 10 digits + space + apostrophe + hyphen + period + comma.
const char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789 '-.,";
static_assert(sizeof(kAlphabet) - 1 == kAlphabetSize);

int alphabet_index(char c) {
  const char* p = std::strchr(kAlphabet, c);
  return (p != nullptr && c != '\0') ? static_cast<int>(p - kAlphabet) : -1;
}

namespace {

const char* kSpeakerNames[] = {"user", "agent"};

const char* kDialogActNames[] = {
    "yes_response",         "greeting",
    "response",             "data_confirmation",
    "procedure_explanation", "data_question",
    "closing",              "data_communication",
    "bear_with_me_response", "acknowledgement",
    "data_response",        "filler_disfluency",
    "thanks",               "open_question",
    "problem_description",  "other",
};

const char* kIntentNames[] = {
    "order_checks",   "check_balance", "replace_card",
    "reset_password", "get_branch_hours", "pay_bill",
    "schedule_appointment", "transfer_money",
};

const char* kSplitNames[] = {"train", "valid", "test"};

template <typename E, int N>
E enum_from_string(const char* const (&names)[N], const std::string& s,
                   const char* what) {
  for (int i = 0; i < N; ++i) {
    if (s == names[i]) return static_cast<E>(i);
  }
  throw ConfigError(std::string("unknown ") + what + ": " + s);
}

}  // namespace

const char* to_string(Speaker s) { return kSpeakerNames[static_cast<int>(s)]; }
const char* to_string(DialogAct a) {
  return kDialogActNames[static_cast<int>(a)];
}
const char* to_string(Intent i) { return kIntentNames[static_cast<int>(i)]; }
const char* to_string(Split s) { return kSplitNames[static_cast<int>(s)]; }

Speaker speaker_from_string(const std::string& s) {
  return enum_from_string<Speaker>(kSpeakerNames, s, "speaker");
}
DialogAct dialog_act_from_string(const std::string& s) {
  return enum_from_string<DialogAct>(kDialogActNames, s, "dialog act");
}
Intent intent_from_string(const std::string& s) {
  return enum_from_string<Intent>(kIntentNames, s, "intent");
}
Split split_from_string(const std::string& s) {
  return enum_from_string<Split>(kSplitNames, s, "split");
}

std::vector<const Conversation*> CorpusManifest::in_split(Split s) const {
  std::vector<const Conversation*> out;
  for (size_t i = 0; i < conversations.size(); ++i) {
    if (split[i] == s) out.push_back(&conversations[i]);
  }
  return out;
}

}  // namespace dialslu
