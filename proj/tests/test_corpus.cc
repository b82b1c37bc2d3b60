// tests/test_corpus.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dialslu/corpus/corpus.h"
#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"
#include "dialslu/util/strings.h"

using namespace dialslu;

namespace {

std::string manifest_to_string(const CorpusManifest& m) {
  const std::string path = "test_corpus_tmp.jsonl";
  write_manifest(path, m);
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  std::remove(path.c_str());
  return ss.str();
}

CorpusConfig small_config() {
  CorpusConfig cfg;
  cfg.conversations_per_intent = 10;
  cfg.num_agents = 2;
  cfg.num_train_callers = 5;
  cfg.num_valid_callers = 1;
  cfg.num_test_callers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("generate_corpus is deterministic: same seed, byte-identical manifest") {
  const auto a = generate_corpus(7, small_config());
  const auto b = generate_corpus(7, small_config());
  CHECK(manifest_to_string(a) == manifest_to_string(b));
  const auto c = generate_corpus(8, small_config());
  CHECK(manifest_to_string(a) != manifest_to_string(c));
}

TEST_CASE("generate_corpus counts: 8 intents x 25 conversations") {
  CorpusConfig cfg = small_config();
  cfg.conversations_per_intent = 25;
  const auto m = generate_corpus(3, cfg);
  CHECK(m.conversations.size() == 200);
  std::map<Intent, int> counts;
  for (const auto& c : m.conversations) counts[c.intent]++;
  for (const auto& [intent, n] : counts) CHECK(n == 25);
  CHECK(counts.size() == 8);
}

TEST_CASE("turn 1 is an agent greeting with no intent content words") {
  const auto m = generate_corpus(42, small_config());
  for (const auto& c : m.conversations) {
    const Turn& first = c.turns.front();
    CHECK(first.speaker == Speaker::kAgent);
    CHECK(first.dialog_acts.count(DialogAct::kGreeting) == 1);
    for (int i = 0; i < kNumIntents; ++i) {
      for (const auto& kw : intent_keywords(static_cast<Intent>(i))) {
        CHECK(!contains_word(first.transcript, kw));
      }
    }
    // And the goal turn does contain this conversation's keyword.
    bool goal_found = false;
    for (const auto& t : c.turns) {
      for (const auto& kw : intent_keywords(c.intent)) {
        goal_found = goal_found || contains_word(t.transcript, kw);
      }
    }
    CHECK(goal_found);
  }
}

TEST_CASE("split invariants: unseen test callers, seen test agents") {
  const auto m = generate_corpus(5, small_config());
  CHECK_NOTHROW(validate_manifest(m));
  std::set<std::string> train_callers, train_agents, test_callers;
  for (size_t i = 0; i < m.conversations.size(); ++i) {
    if (m.split[i] == Split::kTrain) {
      train_callers.insert(m.conversations[i].caller_id);
      train_agents.insert(m.conversations[i].agent_id);
    }
  }
  int n_test = 0;
  for (size_t i = 0; i < m.conversations.size(); ++i) {
    if (m.split[i] != Split::kTest) continue;
    ++n_test;
    CHECK(train_callers.count(m.conversations[i].caller_id) == 0);
    CHECK(train_agents.count(m.conversations[i].agent_id) == 1);
  }
  CHECK(n_test > 0);
  CHECK(m.alphabet.size() == 41);
}

TEST_CASE("turn counts stay within the scripted 2..10 range") {
  const auto m = generate_corpus(19, small_config());
  for (const auto& c : m.conversations) {
    CHECK(c.turns.size() >= 2);
    CHECK(c.turns.size() <= 10);
  }
}

TEST_CASE("corpus config errors") {
  CorpusConfig cfg = small_config();
  cfg.num_agents = 0;
  CHECK_THROWS_AS(generate_corpus(1, cfg), ConfigError);
  cfg = small_config();
  cfg.num_test_callers = 0;
  CHECK_THROWS_AS(generate_corpus(1, cfg), ConfigError);
  cfg = small_config();
  cfg.conversations_per_intent = 2;
  cfg.valid_fraction = 0.5;
  cfg.test_fraction = 0.5;
  CHECK_THROWS_AS(generate_corpus(1, cfg), ConfigError);
}

TEST_CASE("normalize_transcript rules") {
  CHECK(normalize_transcript("hello [noise] there") == "hello there");
  CHECK(normalize_transcript("[laughter] <unk>") == "");
  CHECK(normalize_transcript("Pay  my BILL") == "pay my bill");
  CHECK(normalize_transcript("  spaced   out  ") == "spaced out");
  CHECK(normalize_transcript("mixed [NOISE] Case <UNK>") == "mixed case");
}

TEST_CASE("normalize_transcript is idempotent on noisy random strings") {
  Rng rng(77);
  const std::string junk = "AZ[]<>!@#$%^&*()_+=~`{}|\\;:\"/?";
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const int len = rng.uniform_int(0, 60);
    for (int j = 0; j < len; ++j) {
      const int r = rng.uniform_int(0, 99);
      if (r < 60) {
        s.push_back(kAlphabet[rng.uniform_int(0, 40)]);
      } else if (r < 75) {
        s.push_back(junk[rng.uniform_int(0, static_cast<int>(junk.size()) - 1)]);
      } else if (r < 85) {
        s += "[noise]";
      } else if (r < 92) {
        s += "<unk>";
      } else {
        s += "[laughter]";
      }
    }
    const std::string once = normalize_transcript(s);
    CHECK(normalize_transcript(once) == once);
    for (char c : once) CHECK(alphabet_index(c) >= 0);
  }
}

TEST_CASE("synthesize_waveform durations and determinism") {
  const auto w = synthesize_waveform("a", "caller_00", 9);
  CHECK(w.samples.size() == 1280);  // 80 ms at 16 kHz
  CHECK(w.sample_rate == 16000);

  const auto w2 = synthesize_waveform("a", "caller_00", 9);
  CHECK(w.samples == w2.samples);

  const auto ab = synthesize_waveform("ab", "caller_00", 9);
  const auto ba = synthesize_waveform("ba", "caller_00", 9);
  CHECK(ab.samples.size() == ba.samples.size());
  CHECK(ab.samples != ba.samples);

  const auto other_speaker = synthesize_waveform("a", "caller_01", 9);
  CHECK(w.samples != other_speaker.samples);

  CHECK_THROWS_AS(synthesize_waveform("", "caller_00", 9), EmptyInputError);
}

TEST_CASE("perturb_speed lengths and identity") {
  Rng rng(31);
  Waveform w;
  w.samples.resize(16000);
  rng.fill_uniform(w.samples.data(), 16000, -0.5f, 0.5f);

  const auto same = perturb_speed(w, 1.0);
  CHECK(same.samples == w.samples);

  const auto slow = perturb_speed(w, 0.9);
  CHECK((slow.samples.size() == 17777 || slow.samples.size() == 17778));

  const auto fast = perturb_speed(w, 1.1);
  const double expected = 16000 / 1.1;
  CHECK(std::abs(static_cast<double>(fast.samples.size()) - expected) <= 1.0);

  CHECK_THROWS_AS(perturb_speed(w, 0.0), DomainError);
  CHECK_THROWS_AS(perturb_speed(w, -0.5), DomainError);
}

TEST_CASE("manifest round trip preserves everything") {
  const auto m = generate_corpus(11, small_config());
  const std::string path = "test_corpus_rt.jsonl";
  write_manifest(path, m);
  const auto r = read_manifest(path);
  std::remove(path.c_str());

  CHECK(r.seed == m.seed);
  CHECK(r.alphabet == m.alphabet);
  REQUIRE(r.conversations.size() == m.conversations.size());
  for (size_t i = 0; i < m.conversations.size(); ++i) {
    CHECK(r.split[i] == m.split[i]);
    CHECK(r.conversations[i].id == m.conversations[i].id);
    CHECK(r.conversations[i].intent == m.conversations[i].intent);
    CHECK(r.conversations[i].caller_id == m.conversations[i].caller_id);
    CHECK(r.conversations[i].agent_id == m.conversations[i].agent_id);
    REQUIRE(r.conversations[i].turns.size() == m.conversations[i].turns.size());
    for (size_t t = 0; t < m.conversations[i].turns.size(); ++t) {
      const Turn& a = m.conversations[i].turns[t];
      const Turn& b = r.conversations[i].turns[t];
      CHECK(a.index == b.index);
      CHECK(a.speaker == b.speaker);
      CHECK(a.transcript == b.transcript);
      CHECK(a.dialog_acts == b.dialog_acts);
      CHECK(a.waveform_ref == b.waveform_ref);
    }
  }
}

TEST_CASE("wav files round trip through PCM16") {
  const auto w = synthesize_waveform("hello", "agent_00", 4);
  const std::string path = "test_corpus_tmp.wav";
  write_wav(path, w);
  const auto r = read_wav(path);
  std::remove(path.c_str());
  CHECK(r.sample_rate == 16000);
  REQUIRE(r.samples.size() == w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(std::abs(r.samples[i] - w.samples[i]) < 1.0f / 32000.0f);
  }
}

TEST_CASE("all 16 dialog acts appear in a generated corpus") {
  CorpusConfig cfg = small_config();
  cfg.conversations_per_intent = 40;
  const auto m = generate_corpus(23, cfg);
  std::set<DialogAct> seen;
  for (const auto& c : m.conversations) {
    for (const auto& t : c.turns) {
      seen.insert(t.dialog_acts.begin(), t.dialog_acts.end());
    }
  }
  CHECK(seen.size() == 16);
}
