// dialslu/util/wav.h

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

#ifndef DIALSLU_UTIL_WAV_H_
#define DIALSLU_UTIL_WAV_H_

#include <string>
#include <vector>

namespace dialslu {

struct Waveform {
  std::vector<float> samples;  // nominal range [-1, 1]
  int sample_rate = 16000;
};

// Single-channel 16-bit linear PCM. Samples are clipped to [-1, 1] on write.
void write_wav(const std::string& path, const Waveform& w);
Waveform read_wav(const std::string& path);

}  // namespace dialslu

#endif  // DIALSLU_UTIL_WAV_H_
