// dialslu/corpus/corpus.cc

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

#include "dialslu/corpus/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"
#include "dialslu/util/strings.h"

namespace dialslu {

const double kSpeedFactors[3] = {0.9, 1.0, 1.1};

namespace {

using ordered_json = nlohmann::ordered_json;

struct Line {
  Speaker spk;
  std::string text;
  std::set<DialogAct> acts;
};

const char* kDigitWords[10] = {"zero", "one", "two",   "three", "four",
                               "five", "six", "seven", "eight", "nine"};

std::string random_digits(Rng& rng, int lo, int hi) {
  const int n = rng.uniform_int(lo, hi);
  std::vector<std::string> w;
  w.reserve(n);
  for (int i = 0; i < n; ++i) w.push_back(kDigitWords[rng.uniform_int(0, 9)]);
  return join(w, " ");
}

template <typename T, size_t N>
const T& pick(Rng& rng, const T (&options)[N]) {
  return options[rng.uniform_int(0, static_cast<int>(N) - 1)];
}

// Agent greetings. Turn 1 of every conversation comes from here and carries
// no intent content word.
Line make_greeting(Rng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return {Speaker::kAgent,
              "hello thank you for calling how can i help you today",
              {DialogAct::kGreeting, DialogAct::kOpenQuestion}};
    case 1:
      return {Speaker::kAgent,
              "good morning you have reached customer care what can i do for "
              "you",
              {DialogAct::kGreeting, DialogAct::kOpenQuestion}};
    default:
      return {Speaker::kAgent, "hi there thanks for calling this is the main "
                               "customer desk",
              {DialogAct::kGreeting}};
  }
}

Line make_goal(Rng& rng, Intent intent) {
  static const char* kGoals[kNumIntents][3] = {
      {"i need to order some new checks",
       "i want to order another box of checks",
       "could you help me order more checks for my account"},
      {"i'd like to check my balance", "can you tell me my current balance",
       "i want to know the balance on my account"},
      {"i lost my card and need a replacement",
       "my card was stolen so i need a new card",
       "i need to replace my damaged card"},
      {"i forgot my password and need to reset it",
       "i need to reset my online password",
       "please help me reset the password on my account"},
      {"what are your hours today", "could you tell me the branch hours",
       "i was wondering what your hours are this week"},
      {"i want to pay my bill", "i need to pay a bill from my account",
       "can you help me pay my phone bill"},
      {"i'd like to schedule an appointment",
       "can i set up an appointment for next week",
       "i need to schedule an appointment with a banker"},
      {"i want to transfer money to my savings",
       "i need to transfer some money between my accounts",
       "please help me transfer money to another account"},
  };
  return {Speaker::kUser, kGoals[static_cast<int>(intent)][rng.uniform_int(0, 2)],
          {DialogAct::kProblemDescription}};
}

// Mid-call exchange blocks. Several reuse the same user texts under
// different acts so that the correct label depends on the preceding turn.
enum BlockId {
  kBlockNote,
  kBlockAsk,
  kBlockVolunteer,
  kBlockReadback,
  kBlockHold,
  kBlockInfo,
  kBlockProcess,
  kBlockOffer,
  kNumBlocks,
};

std::vector<Line> make_block(BlockId id, Rng& rng, Intent intent) {
  static const char* kYesTexts[] = {"yes", "yes that's right", "yes exactly"};
  static const char* kOkTexts[] = {"okay", "okay sure", "no problem"};
  static const char* kThanksTexts[] = {"thank you", "thank you so much",
                                       "great thanks"};
  switch (id) {
    case kBlockNote:
      return {{Speaker::kAgent, "please note this call may be recorded",
               {DialogAct::kOther}}};
    case kBlockAsk: {
      static const char* kAsk[] = {"can i get your account number please",
                                   "may i have your account number"};
      return {{Speaker::kAgent, pick(rng, kAsk), {DialogAct::kDataQuestion}},
              {Speaker::kUser, random_digits(rng, 4, 6),
               {DialogAct::kDataResponse}}};
    }
    case kBlockVolunteer: {
      static const char* kLead[] = {"sure i can help with that",
                                    "alright let me pull up your information"};
      return {{Speaker::kAgent, pick(rng, kLead), {DialogAct::kResponse}},
              {Speaker::kUser, random_digits(rng, 4, 6),
               {DialogAct::kDataCommunication}}};
    }
    case kBlockReadback:
      return {{Speaker::kAgent,
               "let me confirm that is " + random_digits(rng, 4, 6),
               {DialogAct::kDataConfirmation}},
              {Speaker::kUser, pick(rng, kYesTexts),
               {DialogAct::kDataConfirmation}}};
    case kBlockHold: {
      static const char* kHold[] = {"bear with me for just a moment",
                                    "one moment please bear with me"};
      return {{Speaker::kAgent, pick(rng, kHold),
               {DialogAct::kBearWithMeResponse}},
              {Speaker::kUser, pick(rng, kOkTexts),
               {DialogAct::kAcknowledgement}}};
    }
    case kBlockInfo: {
      static const char* kInfo[kNumIntents] = {
          "your checks will arrive in the mail shortly",
          "your balance is three hundred and twelve dollars",
          "your new card will arrive in five business days",
          "i have sent a password reset link to your email",
          "we are open nine to five on weekdays",
          "your bill payment has been scheduled",
          "you are booked for tuesday morning",
          "the transfer between your accounts is complete"};
      static const DialogAct kInfoAct[kNumIntents] = {
          DialogAct::kProcedureExplanation, DialogAct::kDataCommunication,
          DialogAct::kProcedureExplanation, DialogAct::kProcedureExplanation,
          DialogAct::kDataCommunication,    DialogAct::kProcedureExplanation,
          DialogAct::kProcedureExplanation, DialogAct::kProcedureExplanation};
      const int idx = static_cast<int>(intent);
      return {{Speaker::kAgent, kInfo[idx], {kInfoAct[idx]}},
              {Speaker::kUser, "okay thank you",
               {DialogAct::kAcknowledgement, DialogAct::kThanks}}};
    }
    case kBlockProcess: {
      static const char* kDone[] = {"alright that has been taken care of",
                                    "all set i have processed that for you"};
      return {{Speaker::kAgent, pick(rng, kDone),
               {DialogAct::kProcedureExplanation}},
              {Speaker::kUser, pick(rng, kThanksTexts), {DialogAct::kThanks}}};
    }
    case kBlockOffer: {
      static const char* kOffer[] = {
          "would you like a text alert when it is done",
          "would you like me to mail a confirmation"};
      std::vector<Line> lines = {
          {Speaker::kAgent, pick(rng, kOffer), {DialogAct::kOpenQuestion}}};
      if (rng.uniform() < 0.7) {
        lines.push_back({Speaker::kUser, pick(rng, kYesTexts),
                         {DialogAct::kYesResponse}});
      } else {
        lines.push_back(
            {Speaker::kUser, "no thank you", {DialogAct::kResponse}});
      }
      return lines;
    }
    default:
      throw Error("unreachable block id");
  }
}

std::vector<Line> make_script(Rng& rng, Intent intent) {
  std::vector<Line> lines;
  lines.push_back(make_greeting(rng));
  const bool filler = rng.uniform() < 0.2;
  if (filler) {
    static const char* kFiller[] = {"um well uh let me see",
                                    "uh just a second um"};
    lines.push_back({Speaker::kUser, pick(rng, kFiller),
                     {DialogAct::kFillerDisfluency}});
  }
  lines.push_back(make_goal(rng, intent));

  // A rare two-turn call: greeting plus goal only.
  if (!filler && rng.uniform() < 0.05) return lines;

  int budget = 10 - static_cast<int>(lines.size());

  // Closing always fits; reserve its turns up front.
  const bool anything_else = rng.uniform() < 0.6;
  const bool user_goodbye = rng.uniform() < 0.5;
  budget -= 1 + (user_goodbye ? 1 : 0) + (anything_else ? 2 : 0);

  std::vector<int> pool(kNumBlocks);
  for (int i = 0; i < kNumBlocks; ++i) pool[i] = i;
  rng.shuffle(pool);
  const int want = rng.uniform_int(1, 3);
  std::vector<int> chosen;
  for (int id : pool) {
    if (static_cast<int>(chosen.size()) == want) break;
    const int size = (id == kBlockNote) ? 1 : 2;
    if (budget - size < 0) continue;
    budget -= size;
    chosen.push_back(id);
  }
  std::sort(chosen.begin(), chosen.end());  // enum order is dialog order
  for (int id : chosen) {
    for (auto& line : make_block(static_cast<BlockId>(id), rng, intent)) {
      lines.push_back(std::move(line));
    }
  }

  if (anything_else) {
    static const char* kNoMore[] = {"no that's everything",
                                    "no that will be all"};
    lines.push_back({Speaker::kAgent,
                     "is there anything else i can help you with",
                     {DialogAct::kOpenQuestion}});
    lines.push_back({Speaker::kUser, pick(rng, kNoMore),
                     {DialogAct::kResponse}});
  }
  static const char* kBye[] = {"thanks for calling have a great day",
                               "thank you for calling goodbye"};
  lines.push_back({Speaker::kAgent, pick(rng, kBye), {DialogAct::kClosing}});
  if (user_goodbye) {
    static const char* kUserBye[] = {"goodbye", "bye bye"};
    lines.push_back({Speaker::kUser, pick(rng, kUserBye),
                     {DialogAct::kClosing}});
  }
  return lines;
}

std::string speaker_pool_id(const char* prefix, int i) {
  std::ostringstream os;
  os << prefix << (i < 10 ? "0" : "") << i;
  return os.str();
}

}  // namespace

const std::vector<std::string>& intent_keywords(Intent intent) {
  static const std::vector<std::string> kKeywords[kNumIntents] = {
      {"checks"},  {"balance"},     {"card"}, {"password"},
      {"hours"},   {"bill"},        {"appointment"}, {"transfer"},
  };
  return kKeywords[static_cast<int>(intent)];
}

CorpusManifest generate_corpus(uint64_t seed, const CorpusConfig& config) {
  if (config.num_agents < 1) {
    throw ConfigError("corpus: at least one agent is required");
  }
  if (config.num_train_callers < 1) {
    throw ConfigError("corpus: at least one train caller is required");
  }
  if (config.test_fraction > 0.0 && config.num_test_callers < 1) {
    throw ConfigError("corpus: test split requested but no test callers");
  }
  if (config.valid_fraction > 0.0 && config.num_valid_callers < 1) {
    throw ConfigError("corpus: valid split requested but no valid callers");
  }
  if (config.conversations_per_intent < 1) {
    throw ConfigError("corpus: need at least one conversation per intent");
  }

  const int n = config.conversations_per_intent;
  const int n_test =
      config.test_fraction > 0.0
          ? std::max(1, static_cast<int>(std::lround(n * config.test_fraction)))
          : 0;
  const int n_valid = config.valid_fraction > 0.0
                          ? std::max(1, static_cast<int>(std::lround(
                                            n * config.valid_fraction)))
                          : 0;
  if (n - n_test - n_valid < 1) {
    throw ConfigError("corpus: split fractions leave no train conversations");
  }

  std::vector<std::string> agents, train_callers, valid_callers, test_callers;
  for (int i = 0; i < config.num_agents; ++i) {
    agents.push_back(speaker_pool_id("agent_", i));
  }
  int caller_serial = 0;
  for (int i = 0; i < config.num_train_callers; ++i) {
    train_callers.push_back(speaker_pool_id("caller_", caller_serial++));
  }
  for (int i = 0; i < config.num_valid_callers; ++i) {
    valid_callers.push_back(speaker_pool_id("caller_", caller_serial++));
  }
  for (int i = 0; i < config.num_test_callers; ++i) {
    test_callers.push_back(speaker_pool_id("caller_", caller_serial++));
  }

  Rng rng = Rng::derive(seed, "corpus");
  CorpusManifest manifest;
  manifest.seed = seed;
  manifest.alphabet = kAlphabet;

  std::set<std::string> train_agents_used;
  for (int intent_idx = 0; intent_idx < kNumIntents; ++intent_idx) {
    const Intent intent = static_cast<Intent>(intent_idx);
    for (int serial = 0; serial < n; ++serial) {
      Split split = Split::kTrain;
      if (serial >= n - n_test) {
        split = Split::kTest;
      } else if (serial >= n - n_test - n_valid) {
        split = Split::kValid;
      }
      const std::vector<std::string>& pool =
          split == Split::kTrain
              ? train_callers
              : (split == Split::kValid ? valid_callers : test_callers);

      Conversation conv;
      std::ostringstream id;
      id << to_string(intent) << "_" << serial / 100 << (serial / 10) % 10
         << serial % 10;
      conv.id = id.str();
      conv.intent = intent;
      conv.caller_id = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
      conv.agent_id =
          agents[rng.uniform_int(0, static_cast<int>(agents.size()) - 1)];

      const auto script = make_script(rng, intent);
      int index = 1;
      for (const auto& line : script) {
        Turn turn;
        turn.index = index;
        turn.speaker = line.spk;
        turn.transcript = normalize_transcript(line.text);
        turn.dialog_acts = line.acts;
        std::ostringstream ref;
        ref << conv.id << "_t" << index / 10 << index % 10;
        turn.waveform_ref = ref.str();
        conv.turns.push_back(std::move(turn));
        ++index;
      }
      if (split == Split::kTrain) train_agents_used.insert(conv.agent_id);
      manifest.conversations.push_back(std::move(conv));
      manifest.split.push_back(split);
    }
  }

  // Test (and valid) agents must be part of the training set.
  const std::string fallback_agent =
      train_agents_used.empty() ? agents.front() : *train_agents_used.begin();
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != Split::kTrain &&
        train_agents_used.count(manifest.conversations[i].agent_id) == 0) {
      manifest.conversations[i].agent_id = fallback_agent;
    }
  }

  validate_manifest(manifest);
  return manifest;
}

std::string normalize_transcript(const std::string& raw) {
  std::string s = to_lower(raw);
  for (const char* token : {"[noise]", "[laughter]", "<unk>"}) {
    size_t pos;
    while ((pos = s.find(token)) != std::string::npos) {
      s.replace(pos, std::string(token).size(), " ");
    }
  }
  std::string filtered;
  filtered.reserve(s.size());
  for (char c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    if (alphabet_index(c) >= 0) filtered.push_back(c);
  }
  // Collapse runs of spaces and trim.
  std::string out;
  out.reserve(filtered.size());
  for (char c : filtered) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out.push_back(c);
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

Waveform synthesize_waveform(const std::string& transcript,
                             const std::string& speaker_id, uint64_t seed,
                             const SynthConfig& cfg) {
  if (transcript.empty()) {
    throw EmptyInputError("cannot synthesize an empty transcript");
  }
  const int sr = cfg.sample_rate;
  const int char_len =
      static_cast<int>(std::lround(sr * cfg.char_duration_ms / 1000.0f));

  Rng sp_rng(fnv1a64(speaker_id) ^ seed ^ fnv1a64("speaker-voice"));
  const double tilt = sp_rng.uniform(-0.6, 0.6);
  const double f_scale = sp_rng.uniform(0.99, 1.01);
  const double noise_gain = sp_rng.uniform(0.8, 1.6);

  Rng noise_rng(fnv1a64(transcript) ^ fnv1a64(speaker_id) ^ seed ^
                fnv1a64("utterance-noise"));

  Waveform w;
  w.sample_rate = sr;
  w.samples.resize(transcript.size() * static_cast<size_t>(char_len));

  const double two_pi = 2.0 * 3.14159265358979323846;
  const int ramp = std::max(1, sr * 4 / 1000);  // 4 ms attack/release
  float peak = 0.0f;

  for (size_t ci = 0; ci < transcript.size(); ++ci) {
    const int idx = alphabet_index(transcript[ci]);
    float* dst = w.samples.data() + ci * static_cast<size_t>(char_len);
    if (transcript[ci] == ' ' || idx < 0) {
      for (int i = 0; i < char_len; ++i) {
        dst[i] = static_cast<float>(noise_rng.normal() * cfg.noise_level *
                                    noise_gain * 0.5);
      }
      continue;
    }
    const double f1 = (180.0 + 52.0 * idx) * f_scale;
    const double f2 = (2500.0 + 38.0 * idx) * f_scale;
    const double a1 = 0.30 * std::exp(tilt * (f1 - 1200.0) / 1800.0);
    const double a2 = 0.18 * std::exp(tilt * (f2 - 1200.0) / 1800.0);
    for (int i = 0; i < char_len; ++i) {
      double env = 1.0;
      if (i < ramp) {
        env = 0.5 - 0.5 * std::cos(3.14159265358979323846 * i / ramp);
      } else if (i >= char_len - ramp) {
        env = 0.5 - 0.5 * std::cos(3.14159265358979323846 *
                                   (char_len - 1 - i) / ramp);
      }
      const double t = static_cast<double>(i) / sr;
      double v = env * (a1 * std::sin(two_pi * f1 * t) +
                        a2 * std::sin(two_pi * f2 * t));
      v += noise_rng.normal() * cfg.noise_level * noise_gain;
      dst[i] = static_cast<float>(v);
      peak = std::max(peak, std::abs(dst[i]));
    }
  }
  if (peak > 0.98f) {
    const float g = 0.98f / peak;
    for (float& v : w.samples) v *= g;
  }
  return w;
}

Waveform perturb_speed(const Waveform& wave, double factor) {
  if (factor <= 0.0) throw DomainError("speed factor must be positive");
  if (factor == 1.0) return wave;
  const int n = static_cast<int>(wave.samples.size());
  Waveform out;
  out.sample_rate = wave.sample_rate;
  if (n == 0) return out;
  const int out_len = static_cast<int>(std::llround(n / factor));
  out.samples.resize(out_len);
  for (int i = 0; i < out_len; ++i) {
    const double pos = i * factor;
    const int i0 = static_cast<int>(pos);
    if (i0 >= n - 1) {
      out.samples[i] = wave.samples[n - 1];
      continue;
    }
    const double frac = pos - i0;
    out.samples[i] = static_cast<float>((1.0 - frac) * wave.samples[i0] +
                                        frac * wave.samples[i0 + 1]);
  }
  return out;
}

void write_manifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  ordered_json header;
  header["record"] = "header";
  header["version"] = 1;
  header["seed"] = manifest.seed;
  header["alphabet"] = manifest.alphabet;
  os << header.dump() << "\n";
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    const Conversation& c = manifest.conversations[i];
    ordered_json j;
    j["record"] = "conversation";
    j["id"] = c.id;
    j["intent"] = to_string(c.intent);
    j["caller_id"] = c.caller_id;
    j["agent_id"] = c.agent_id;
    j["split"] = to_string(manifest.split[i]);
    j["turns"] = ordered_json::array();
    for (const Turn& t : c.turns) {
      ordered_json jt;
      jt["index"] = t.index;
      jt["speaker"] = to_string(t.speaker);
      jt["transcript"] = t.transcript;
      jt["dialog_acts"] = ordered_json::array();
      for (DialogAct a : t.dialog_acts) jt["dialog_acts"].push_back(to_string(a));
      jt["waveform_ref"] = t.waveform_ref;
      j["turns"].push_back(std::move(jt));
    }
    os << j.dump() << "\n";
  }
  if (!os) throw IoError("short write: " + path);
}

CorpusManifest read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  CorpusManifest manifest;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto j = ordered_json::parse(line);
    const std::string record = j.at("record").get<std::string>();
    if (record == "header") {
      manifest.seed = j.at("seed").get<uint64_t>();
      manifest.alphabet = j.at("alphabet").get<std::string>();
      have_header = true;
      continue;
    }
    if (record != "conversation") {
      throw IoError("unknown manifest record type: " + record);
    }
    Conversation c;
    c.id = j.at("id").get<std::string>();
    c.intent = intent_from_string(j.at("intent").get<std::string>());
    c.caller_id = j.at("caller_id").get<std::string>();
    c.agent_id = j.at("agent_id").get<std::string>();
    for (const auto& jt : j.at("turns")) {
      Turn t;
      t.index = jt.at("index").get<int>();
      t.speaker = speaker_from_string(jt.at("speaker").get<std::string>());
      t.transcript = jt.at("transcript").get<std::string>();
      for (const auto& ja : jt.at("dialog_acts")) {
        t.dialog_acts.insert(dialog_act_from_string(ja.get<std::string>()));
      }
      t.waveform_ref = jt.at("waveform_ref").get<std::string>();
      c.turns.push_back(std::move(t));
    }
    manifest.split.push_back(split_from_string(j.at("split").get<std::string>()));
    manifest.conversations.push_back(std::move(c));
  }
  if (!have_header) throw IoError("manifest has no header record: " + path);
  return manifest;
}

void validate_manifest(const CorpusManifest& manifest) {
  if (manifest.alphabet.size() != kAlphabetSize) {
    throw ConsistencyError("manifest alphabet must have 41 characters");
  }
  if (manifest.split.size() != manifest.conversations.size()) {
    throw ConsistencyError("manifest split list out of sync");
  }
  std::set<std::string> ids;
  std::set<std::string> train_callers, train_agents;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    const Conversation& c = manifest.conversations[i];
    if (!ids.insert(c.id).second) {
      throw ConsistencyError("duplicate conversation id: " + c.id);
    }
    if (c.turns.empty()) {
      throw ConsistencyError("conversation with no turns: " + c.id);
    }
    for (size_t t = 0; t < c.turns.size(); ++t) {
      const Turn& turn = c.turns[t];
      if (turn.index != static_cast<int>(t) + 1) {
        throw ConsistencyError("non-contiguous turn indices in " + c.id);
      }
      if (turn.dialog_acts.empty()) {
        throw ConsistencyError("turn without dialog acts in " + c.id);
      }
      for (char ch : turn.transcript) {
        if (alphabet_index(ch) < 0) {
          throw ConsistencyError("transcript outside corpus alphabet in " +
                                 c.id);
        }
      }
    }
    if (manifest.split[i] == Split::kTrain) {
      train_callers.insert(c.caller_id);
      train_agents.insert(c.agent_id);
    }
  }
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != Split::kTest) continue;
    const Conversation& c = manifest.conversations[i];
    if (train_callers.count(c.caller_id) != 0) {
      throw ConsistencyError("test caller also appears in train: " +
                             c.caller_id);
    }
    if (train_agents.count(c.agent_id) == 0) {
      throw ConsistencyError("test agent missing from train: " + c.agent_id);
    }
  }
}

void write_corpus_waveforms(const CorpusManifest& manifest,
                            const std::string& wav_dir,
                            const SynthConfig& cfg) {
  for (const Conversation& c : manifest.conversations) {
    for (const Turn& t : c.turns) {
      const std::string speaker =
          t.speaker == Speaker::kUser ? c.caller_id : c.agent_id;
      const Waveform w =
          synthesize_waveform(t.transcript, speaker, manifest.seed, cfg);
      write_wav(wav_dir + "/" + t.waveform_ref + ".wav", w);
    }
  }
}

}  // namespace dialslu
