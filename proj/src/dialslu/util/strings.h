// dialslu/util/strings.h

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

#ifndef DIALSLU_UTIL_STRINGS_H_
#define DIALSLU_UTIL_STRINGS_H_

#include <string>
#include <vector>

namespace dialslu {

std::vector<std::string> split_words(const std::string& s);
std::string join(const std::vector<std::string>& parts,
                 const std::string& sep);
std::string to_lower(std::string s);
std::string trim(const std::string& s);
bool contains_word(const std::string& text, const std::string& word);

}  // namespace dialslu

#endif  // DIALSLU_UTIL_STRINGS_H_
