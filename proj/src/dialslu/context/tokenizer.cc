// dialslu/context/tokenizer.cc

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

#include "dialslu/context/tokenizer.h"

#include <algorithm>
#include <set>

#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"
#include "dialslu/util/strings.h"

namespace dialslu {

Tokenizer Tokenizer::build(const CorpusManifest& manifest) {
  Tokenizer tok;
  tok.tokens_ = {"[CLS]", "[SEP]", "[PAD]", "[UNK]", "<user>", "<agent>"};
  for (int a = 0; a < kNumDialogActs; ++a) {
    tok.tokens_.push_back(std::string("<act:") +
                          to_string(static_cast<DialogAct>(a)) + ">");
  }
  std::set<std::string> words;
  for (size_t i = 0; i < manifest.conversations.size(); ++i) {
    if (manifest.split[i] != Split::kTrain) continue;
    for (const Turn& t : manifest.conversations[i].turns) {
      for (const auto& w : split_words(t.transcript)) words.insert(w);
    }
  }
  for (const auto& w : words) tok.tokens_.push_back(w);
  tok.index_words();
  return tok;
}

void Tokenizer::index_words() {
  word_to_id_.clear();
  for (int i = kFirstWord; i < vocab_size(); ++i) {
    word_to_id_[tokens_[i]] = i;
  }
}

int Tokenizer::word_id(const std::string& word) const {
  const auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnk : it->second;
}

std::vector<int> Tokenizer::encode_words(const std::string& transcript) const {
  std::vector<int> out;
  for (const auto& w : split_words(transcript)) out.push_back(word_id(w));
  return out;
}

uint64_t Tokenizer::vocab_hash() const {
  std::string joined;
  for (const auto& t : tokens_) {
    joined += t;
    joined.push_back('\n');
  }
  return fnv1a64(joined);
}

nlohmann::ordered_json Tokenizer::to_json() const {
  nlohmann::ordered_json j;
  j["tokens"] = tokens_;
  j["hash"] = vocab_hash();
  return j;
}

Tokenizer Tokenizer::from_json(const nlohmann::ordered_json& j) {
  Tokenizer tok;
  tok.tokens_ = j.at("tokens").get<std::vector<std::string>>();
  if (tok.vocab_size() < kFirstWord) {
    throw IoError("tokenizer vocabulary too small to be valid");
  }
  tok.index_words();
  if (j.contains("hash") && j.at("hash").get<uint64_t>() != tok.vocab_hash()) {
    throw ConsistencyError("tokenizer vocabulary hash mismatch");
  }
  return tok;
}

}  // namespace dialslu
