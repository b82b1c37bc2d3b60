// dialslu/corpus/corpus.h

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

#ifndef DIALSLU_CORPUS_CORPUS_H_
#define DIALSLU_CORPUS_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dialslu/corpus/types.h"
#include "dialslu/util/wav.h"

namespace dialslu {

struct CorpusConfig {
  int conversations_per_intent = 25;
  int num_agents = 3;
  int num_train_callers = 10;
  int num_valid_callers = 2;
  int num_test_callers = 4;
  // Fractions of each intent's conversations per split (remainder -> train).
  double valid_fraction = 0.1;
  double test_fraction = 0.2;
};

// Deterministic in (seed, config). Scripted multi-turn banking dialogs:
// turn 1 is always an agent greeting carrying no intent content; the caller
// states the goal in an early turn; mid-call turns are drawn from a shared
// exchange pool so that most of them are intent-neutral and several carry
// dialog acts that depend on the preceding turn.
CorpusManifest generate_corpus(uint64_t seed, const CorpusConfig& config);

// Lowercases, removes [noise], [laughter] and <unk>, drops characters
// outside the corpus alphabet, and collapses whitespace. Total and
// idempotent.
std::string normalize_transcript(const std::string& raw);

struct SynthConfig {
  int sample_rate = 16000;
  float char_duration_ms = 80.0f;
  float noise_level = 0.004f;
};

// Per-character tonal synthesis: every alphabet character has a fixed
// two-tone frequency signature; speakers impose a spectral tilt, a small
// frequency offset and their own noise floor. Deterministic in
// (transcript, speaker_id, seed).
Waveform synthesize_waveform(const std::string& transcript,
                             const std::string& speaker_id, uint64_t seed,
                             const SynthConfig& cfg = {});

// Speed perturbation by linear-interpolation resampling; output length is
// round(n / factor). factor 1.0 returns an identical copy.
Waveform perturb_speed(const Waveform& wave, double factor);

// Standard augmentation factors {0.9, 1.0, 1.1}.
extern const double kSpeedFactors[3];

// Line-delimited manifest: one header record then one conversation per line.
void write_manifest(const std::string& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::string& path);

// Checks the documented manifest invariants (contiguous 1-based turn
// indices, non-empty act sets, caller/agent split rules, alphabet size).
// Throws on violation.
void validate_manifest(const CorpusManifest& manifest);

// Synthesizes and writes one PCM16 wav per turn into wav_dir, named
// <waveform_ref>.wav.
void write_corpus_waveforms(const CorpusManifest& manifest,
                            const std::string& wav_dir,
                            const SynthConfig& cfg = {});

// Per-intent content words used by the templates; the greeting turn never
// contains any of them.
const std::vector<std::string>& intent_keywords(Intent intent);

}  // namespace dialslu

#endif  // DIALSLU_CORPUS_CORPUS_H_
