// dialslu/features/features.h

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

#ifndef DIALSLU_FEATURES_FEATURES_H_
#define DIALSLU_FEATURES_FEATURES_H_

#include <string>
#include <vector>

#include "dialslu/util/tensor.h"
#include "dialslu/util/wav.h"

namespace dialslu {

// Acoustic feature pipeline: 40-dim log-mel every 10 ms, globally normalized,
// augmented with delta and delta-delta, pairs of frames stacked with every
// second frame skipped, giving 240-dim vectors every 20 ms.

struct FeatureSequence {
  Tensor frames;  // num_frames x dim
  float frame_period_ms = 10.0f;

  int dim() const { return frames.cols; }
  int num_frames() const { return frames.rows; }
};

struct NormStats {
  std::vector<float> mean;
  std::vector<float> std;  // floored at 1e-8

  int dim() const { return static_cast<int>(mean.size()); }
};

struct LogMelConfig {
  int num_filters = 40;
  float window_ms = 25.0f;
  float hop_ms = 10.0f;
  float fmin_hz = 0.0f;
  float fmax_hz = 8000.0f;
  float preemphasis = 0.97f;
  double energy_floor = 1e-10;
};

FeatureSequence logmel(const Waveform& wave, const LogMelConfig& cfg = {});

// 40 -> 120 dims: [static | delta | delta-delta], deltas by 2-frame linear
// regression with edge replication.
FeatureSequence add_deltas(const FeatureSequence& seq);

// Per-dimension (x - mean) / std.
FeatureSequence normalize(const FeatureSequence& seq, const NormStats& stats);

// 120 @ 10 ms -> 240 @ 20 ms; an odd final frame is paired with a copy of
// itself.
FeatureSequence stack_and_skip(const FeatureSequence& seq);

NormStats compute_norm_stats(const std::vector<FeatureSequence>& train_seqs);

// Streaming accumulator equivalent to compute_norm_stats over everything
// add()ed so far.
class NormStatsAccumulator {
 public:
  void add(const FeatureSequence& seq);
  NormStats finalize() const;

 private:
  std::vector<double> sum_, sumsq_;
  long long count_ = 0;
};

// logmel -> normalize -> add_deltas -> stack_and_skip.
FeatureSequence feature_pipeline(const Waveform& wave, const NormStats& stats,
                                 const LogMelConfig& cfg = {});

// Per-utterance binary feature cache (dim, frame count, frame period header
// followed by float32 frames).
void write_feature_file(const std::string& path, const FeatureSequence& seq);
FeatureSequence read_feature_file(const std::string& path);

void write_norm_stats(const std::string& path, const NormStats& stats);
NormStats read_norm_stats(const std::string& path);

}  // namespace dialslu

#endif  // DIALSLU_FEATURES_FEATURES_H_
