// dialslu/corpus/types.h

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

#ifndef DIALSLU_CORPUS_TYPES_H_
#define DIALSLU_CORPUS_TYPES_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace dialslu {

enum class Speaker { kUser, kAgent };

// The fixed 16-label dialog-act universe. Enum order is the canonical label
// order used wherever acts must be serialized deterministically.
enum class DialogAct {
  kYesResponse,
  kGreeting,
  kResponse,
  kDataConfirmation,
  kProcedureExplanation,
  kDataQuestion,
  kClosing,
  kDataCommunication,
  kBearWithMeResponse,
  kAcknowledgement,
  kDataResponse,
  kFillerDisfluency,
  kThanks,
  kOpenQuestion,
  kProblemDescription,
  kOther,
};
constexpr int kNumDialogActs = 16;

// The fixed 8-label conversation intent universe, in canonical order.
enum class Intent {
  kOrderChecks,
  kCheckBalance,
  kReplaceCard,
  kResetPassword,
  kGetBranchHours,
  kPayBill,
  kScheduleAppointment,
  kTransferMoney,
};
constexpr int kNumIntents = 8;

const char* to_string(Speaker s);
const char* to_string(DialogAct a);
const char* to_string(Intent i);
Speaker speaker_from_string(const std::string& s);
DialogAct dialog_act_from_string(const std::string& s);
Intent intent_from_string(const std::string& s);

enum class Split { kTrain, kValid, kTest };
const char* to_string(Split s);
Split split_from_string(const std::string& s);

struct Turn {
  int index = 0;  // 1-based position in the conversation
  Speaker speaker = Speaker::kUser;
  std::string transcript;             // normalized, corpus alphabet only
  std::set<DialogAct> dialog_acts;    // non-empty
  std::string waveform_ref;
};

struct Conversation {
  std::string id;
  std::vector<Turn> turns;
  Intent intent = Intent::kOrderChecks;
  std::string caller_id;
  std::string agent_id;
};

// The ordered 41-character corpus alphabet (BLANK is not a character; the
// transducer appends it as output index 41).
extern const char kAlphabet[];
constexpr int kAlphabetSize = 41;

// -1 when c is not in the alphabet.
int alphabet_index(char c);

struct CorpusManifest {
  std::vector<Conversation> conversations;
  std::vector<Split> split;  // parallel to conversations
  std::string alphabet;      // always kAlphabet for generated corpora
  uint64_t seed = 0;

  std::vector<const Conversation*> in_split(Split s) const;
};

}  // namespace dialslu

#endif  // DIALSLU_CORPUS_TYPES_H_
