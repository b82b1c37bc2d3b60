// tests/test_context.cc

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

#include <cmath>
#include <cstdio>

#include "dialslu/context/model.h"
#include "dialslu/context/train.h"
#include "dialslu/corpus/corpus.h"
#include "dialslu/util/errors.h"

using namespace dialslu;

namespace {

CorpusManifest small_corpus(uint64_t seed = 7) {
  CorpusConfig cc;
  cc.conversations_per_intent = 6;
  cc.num_agents = 2;
  cc.num_train_callers = 4;
  cc.num_valid_callers = 1;
  cc.num_test_callers = 2;
  return generate_corpus(seed, cc);
}

Conversation two_turn_conversation() {
  Conversation conv;
  conv.id = "unit_000";
  conv.intent = Intent::kPayBill;
  Turn a;
  a.index = 1;
  a.speaker = Speaker::kAgent;
  a.transcript = "hello welcome";
  a.dialog_acts = {DialogAct::kGreeting};
  Turn b;
  b.index = 2;
  b.speaker = Speaker::kUser;
  b.transcript = "i want to pay my bill";
  b.dialog_acts = {DialogAct::kProblemDescription};
  conv.turns = {a, b};
  return conv;
}

ContextModelConfig tiny_model_config() {
  ContextModelConfig cfg;
  cfg.layers = 1;
  cfg.heads = 2;
  cfg.d_model = 32;
  cfg.d_ff = 64;
  cfg.max_len = 64;
  cfg.proj_dim = kContextEmbeddingDim;
  return cfg;
}

}  // namespace

TEST_CASE("build_history_sequence: empty history form is [CLS][SEP]") {
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  const auto conv = two_turn_conversation();
  const auto ids = build_history_sequence(tok, conv, 1,
                                          HistorySpec::speaker_history(),
                                          /*include_current=*/false, 64);
  CHECK(ids == std::vector<int>{Tokenizer::kCls, Tokenizer::kSep});
}

TEST_CASE("build_history_sequence renders the documented training form") {
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  const auto conv = two_turn_conversation();
  const auto ids = build_history_sequence(tok, conv, 2,
                                          HistorySpec::speaker_history(),
                                          /*include_current=*/true, 64);
  std::vector<int> expect = {Tokenizer::kCls,
                             tok.role_token(Speaker::kAgent)};
  for (int id : tok.encode_words("hello welcome")) expect.push_back(id);
  expect.push_back(Tokenizer::kSep);
  for (int id : tok.encode_words("i want to pay my bill")) {
    expect.push_back(id);
  }
  expect.push_back(Tokenizer::kSep);
  CHECK(ids == expect);
}

TEST_CASE("window=last-k restricts rendered turns") {
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  // Use a real 5+ turn conversation from the corpus.
  const Conversation* five = nullptr;
  for (const auto& c : manifest.conversations) {
    if (c.turns.size() >= 5) {
      five = &c;
      break;
    }
  }
  REQUIRE(five != nullptr);

  HistorySpec spec = HistorySpec::speaker_history_acts();
  spec.window = 2;
  const auto windowed = build_history_sequence(tok, *five, 5, spec,
                                               /*include_current=*/false, 256);

  // Same rendering from a conversation holding only turns 3 and 4.
  Conversation trimmed = *five;
  trimmed.turns = {five->turns[2], five->turns[3]};
  trimmed.turns[0].index = 1;
  trimmed.turns[1].index = 2;
  Turn current = five->turns[4];
  current.index = 3;
  trimmed.turns.push_back(current);
  HistorySpec full = spec;
  full.window = 0;
  const auto direct = build_history_sequence(tok, trimmed, 3, full,
                                             /*include_current=*/false, 256);
  CHECK(windowed == direct);

  // window=all equals last-k whenever k >= t-1.
  HistorySpec wide = spec;
  wide.window = 9;
  CHECK(build_history_sequence(tok, *five, 5, wide, false, 256) ==
        build_history_sequence(tok, *five, 5, full, false, 256));
}

TEST_CASE("truncation drops oldest history first and never CLS") {
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  const Conversation* longest = nullptr;
  for (const auto& c : manifest.conversations) {
    if (longest == nullptr || c.turns.size() > longest->turns.size()) {
      longest = &c;
    }
  }
  const int t = static_cast<int>(longest->turns.size());
  const auto spec = HistorySpec::speaker_history_acts();
  const auto full = build_history_sequence(tok, *longest, t, spec, true, 4096);
  REQUIRE(full.size() > 20);

  // Recover the untruncated blocks: [CLS] H [SEP] C [SEP]. No history or
  // word token collides with SEP.
  const auto first_sep =
      std::find(full.begin() + 1, full.end(), Tokenizer::kSep);
  const std::vector<int> hist(full.begin() + 1, first_sep);
  const std::vector<int> cur(first_sep + 1, full.end() - 1);

  for (int budget = 5; budget <= static_cast<int>(full.size()); ++budget) {
    const auto seq =
        build_history_sequence(tok, *longest, t, spec, true, budget);
    CHECK(static_cast<int>(seq.size()) <= budget);
    CHECK(seq.front() == Tokenizer::kCls);
    CHECK(seq.back() == Tokenizer::kSep);

    // The kept tokens are exactly the newest ones of each block.
    const int overflow = static_cast<int>(full.size()) - budget;
    const int drop_h =
        std::min(std::max(overflow, 0), static_cast<int>(hist.size()));
    const int drop_c = std::min(std::max(overflow - drop_h, 0),
                                static_cast<int>(cur.size()));
    std::vector<int> expect = {Tokenizer::kCls};
    expect.insert(expect.end(), hist.begin() + drop_h, hist.end());
    expect.push_back(Tokenizer::kSep);
    expect.insert(expect.end(), cur.begin() + drop_c, cur.end());
    expect.push_back(Tokenizer::kSep);
    CHECK(seq == expect);
  }
}

TEST_CASE("acts-only history contains no base-vocabulary tokens") {
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  HistorySpec spec;
  spec.use_dialog_acts = true;
  for (const auto& conv : manifest.conversations) {
    const int t = static_cast<int>(conv.turns.size());
    const auto ids = build_history_sequence(tok, conv, t, spec,
                                            /*include_current=*/false, 256);
    for (int id : ids) CHECK(id < Tokenizer::kFirstWord);
  }
}

TEST_CASE("history spec validation and labels") {
  HistorySpec speaker_only;
  speaker_only.use_speaker = true;
  CHECK_THROWS_AS(speaker_only.validate(), ConfigError);

  CHECK(HistorySpec::speaker_history().label() == "speaker+history");
  CHECK(HistorySpec::none().label() == "none");
  HistorySpec w = HistorySpec::speaker_history_acts();
  w.window = 4;
  CHECK(w.label() == "speaker+history+acts@last4");
  const auto parsed = HistorySpec::from_label("speaker+history+acts@last4");
  CHECK(parsed.use_speaker);
  CHECK(parsed.use_history_text);
  CHECK(parsed.use_dialog_acts);
  CHECK(parsed.window == 4);

  const auto bad_turn = two_turn_conversation();
  const auto manifest = small_corpus();
  const Tokenizer tok = Tokenizer::build(manifest);
  CHECK_THROWS_AS(build_history_sequence(tok, bad_turn, 0,
                                         HistorySpec::speaker_history(), true,
                                         64),
                  IndexError);
  CHECK_THROWS_AS(build_history_sequence(tok, bad_turn, 3,
                                         HistorySpec::speaker_history(), true,
                                         64),
                  IndexError);
}

TEST_CASE("context model: classification heads behave as documented") {
  const auto manifest = small_corpus();
  Tokenizer tok = Tokenizer::build(manifest);

  ContextModelConfig intent_cfg = tiny_model_config();
  intent_cfg.task = "intent";
  ContextModel intent_model(intent_cfg, tok, 3);

  const auto conv = two_turn_conversation();
  const auto ids = build_history_sequence(tok, conv, 2,
                                          HistorySpec::speaker_history(), true,
                                          intent_cfg.max_len);
  const auto probs = intent_model.classify(ids);
  REQUIRE(probs.size() == 8);
  double sum = 0.0;
  for (float p : probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

  ContextModelConfig act_cfg = tiny_model_config();
  act_cfg.task = "dialog_act";
  ContextModel act_model(act_cfg, tok, 5);
  // Zeroed head -> sigma(0) = 0.5 for every act.
  act_model.params().at("head.w")->value.fill(0.0f);
  act_model.params().at("head.b")->value.fill(0.0f);
  const auto act_probs = act_model.classify(ids);
  REQUIRE(act_probs.size() == 16);
  for (float p : act_probs) CHECK(p == doctest::Approx(0.5).epsilon(1e-6));

  std::vector<int> too_long(act_cfg.max_len + 1, Tokenizer::kSep);
  too_long[0] = Tokenizer::kCls;
  CHECK_THROWS_AS(act_model.classify(too_long), LengthError);
}

TEST_CASE("embed_context: 128 dims, deterministic, prefix-functional") {
  const auto manifest = small_corpus();
  Tokenizer tok = Tokenizer::build(manifest);
  ContextModelConfig cfg = tiny_model_config();
  cfg.task = "intent";
  ContextModel model(cfg, tok, 9);

  const auto& conv_a = manifest.conversations[0];
  const auto& conv_b = manifest.conversations[1];

  const auto e1 = model.embed_context(conv_a, 1, HistorySpec::history_only());
  CHECK(e1.values.size() == 128);
  const auto e1b = model.embed_context(conv_b, 1, HistorySpec::history_only());
  // Empty history: one shared vector for every conversation.
  CHECK(e1.values == e1b.values);

  const auto e2 = model.embed_context(conv_a, 2, HistorySpec::history_only());
  const auto e2_again =
      model.embed_context(conv_a, 2, HistorySpec::history_only());
  CHECK(e2.values == e2_again.values);

  // Identical first t-1 turns give identical embeddings.
  Conversation clone = conv_b;
  clone.turns[0] = conv_a.turns[0];
  const auto e2c = model.embed_context(clone, 2, HistorySpec::history_only());
  CHECK(e2.values == e2c.values);
}

TEST_CASE("context training improves on a tiny corpus and returns best epoch") {
  const auto manifest = small_corpus(13);
  ContextTrainSettings settings;
  settings.epochs = 4;
  settings.batch_size = 8;
  settings.learning_rate = 3e-4f;
  settings.seed = 17;

  const auto result =
      train_context_model(manifest, "intent", HistorySpec::speaker_history(),
                          settings, tiny_model_config());
  REQUIRE(result.log.size() == 4);
  CHECK(result.log.back().train_loss < result.log.front().train_loss);
  CHECK(result.best_valid_metric >= 0.0);

  CHECK_THROWS_AS(
      train_context_model(manifest, "slots", HistorySpec::none(), settings,
                          tiny_model_config()),
      ConfigError);
}

TEST_CASE("context checkpoint round trip") {
  const auto manifest = small_corpus();
  Tokenizer tok = Tokenizer::build(manifest);
  ContextModelConfig cfg = tiny_model_config();
  cfg.task = "dialog_act";
  ContextModel model(cfg, tok, 21);
  model.save("test_context_tmp.ckpt");
  auto loaded = ContextModel::load("test_context_tmp.ckpt");
  std::remove("test_context_tmp.ckpt");

  CHECK(loaded.config().task == "dialog_act");
  CHECK(loaded.tokenizer().vocab_hash() == tok.vocab_hash());
  const auto conv = two_turn_conversation();
  const auto a = model.embed_context(conv, 2, HistorySpec::speaker_history());
  const auto b = loaded.embed_context(conv, 2, HistorySpec::speaker_history());
  CHECK(a.values == b.values);
}
