// dialslu/context/tokenizer.h

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

#ifndef DIALSLU_CONTEXT_TOKENIZER_H_
#define DIALSLU_CONTEXT_TOKENIZER_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "dialslu/corpus/types.h"

namespace dialslu {

// Word-level vocabulary with marker, role and dialog-act special tokens.
// Token layout: [CLS] [SEP] [PAD] [UNK] <user> <agent> 16 act tokens, then
// the base words in sorted order.
class Tokenizer {
 public:
  static constexpr int kCls = 0;
  static constexpr int kSep = 1;
  static constexpr int kPad = 2;
  static constexpr int kUnk = 3;
  static constexpr int kFirstRole = 4;
  static constexpr int kFirstAct = 6;
  static constexpr int kFirstWord = 6 + kNumDialogActs;

  // Vocabulary from the train-split transcripts of a corpus.
  static Tokenizer build(const CorpusManifest& manifest);

  int word_id(const std::string& word) const;  // kUnk when absent
  int role_token(Speaker s) const { return kFirstRole + static_cast<int>(s); }
  int act_token(DialogAct a) const { return kFirstAct + static_cast<int>(a); }
  std::vector<int> encode_words(const std::string& transcript) const;

  int vocab_size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token_string(int id) const { return tokens_[id]; }
  uint64_t vocab_hash() const;

  nlohmann::ordered_json to_json() const;
  static Tokenizer from_json(const nlohmann::ordered_json& j);

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> word_to_id_;

  void index_words();
};

}  // namespace dialslu

#endif  // DIALSLU_CONTEXT_TOKENIZER_H_
