// dialslu/features/features.cc

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

#include "dialslu/features/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dialslu/features/fft.h"
#include "dialslu/util/errors.h"

namespace dialslu {

namespace {

constexpr float kStdFloor = 1e-8f;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Triangular mel filterbank as nfft/2+1 x num_filters weights.
std::vector<std::vector<double>> build_filterbank(const LogMelConfig& cfg,
                                                  int nfft, int sample_rate) {
  const int nbins = nfft / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.fmin_hz);
  const double mel_hi = hz_to_mel(cfg.fmax_hz);
  std::vector<double> edges(cfg.num_filters + 2);
  for (int i = 0; i < cfg.num_filters + 2; ++i) {
    edges[i] = mel_lo + (mel_hi - mel_lo) * i / (cfg.num_filters + 1);
  }
  std::vector<std::vector<double>> fb(
      static_cast<size_t>(cfg.num_filters),
      std::vector<double>(static_cast<size_t>(nbins), 0.0));
  const double bin_hz = static_cast<double>(sample_rate) / nfft;
  for (int m = 0; m < cfg.num_filters; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (int k = 0; k < nbins; ++k) {
      const double mel = hz_to_mel(k * bin_hz);
      if (mel <= left || mel >= right) continue;
      fb[m][k] = mel < center ? (mel - left) / (center - left)
                              : (right - mel) / (right - center);
    }
  }
  return fb;
}

}  // namespace

FeatureSequence logmel(const Waveform& wave, const LogMelConfig& cfg) {
  const int sr = wave.sample_rate;
  const int win = static_cast<int>(std::lround(sr * cfg.window_ms / 1000.0f));
  const int hop = static_cast<int>(std::lround(sr * cfg.hop_ms / 1000.0f));
  const int n = static_cast<int>(wave.samples.size());
  if (n < win) {
    throw EmptyInputError("waveform shorter than one analysis window");
  }
  const int num_frames = (n - win) / hop + 1;
  const int nfft = next_pow2(win);
  const auto fb = build_filterbank(cfg, nfft, sr);

  std::vector<double> hamming(static_cast<size_t>(win));
  for (int i = 0; i < win; ++i) {
    hamming[i] = 0.54 - 0.46 * std::cos(2.0 * 3.14159265358979323846 * i /
                                        (win - 1));
  }

  FeatureSequence out;
  out.frames = Tensor(num_frames, cfg.num_filters);
  out.frame_period_ms = cfg.hop_ms;

  std::vector<float> frame(static_cast<size_t>(win));
  for (int t = 0; t < num_frames; ++t) {
    const float* src = wave.samples.data() + static_cast<size_t>(t) * hop;
    for (int i = 0; i < win; ++i) {
      const float prev = i > 0 ? src[i - 1] : src[0];
      frame[i] = static_cast<float>((src[i] - cfg.preemphasis * prev) *
                                    hamming[i]);
    }
    const auto pow = power_spectrum(frame.data(), win, nfft);
    float* dst = out.frames.row(t);
    for (int m = 0; m < cfg.num_filters; ++m) {
      double e = 0.0;
      const auto& w = fb[m];
      for (size_t k = 0; k < w.size(); ++k) {
        if (w[k] != 0.0) e += w[k] * pow[k];
      }
      dst[m] = static_cast<float>(std::log(std::max(e, cfg.energy_floor)));
    }
  }
  return out;
}

FeatureSequence add_deltas(const FeatureSequence& seq) {
  const int T = seq.num_frames();
  const int D = seq.dim();
  FeatureSequence out;
  out.frame_period_ms = seq.frame_period_ms;
  out.frames = Tensor(T, 3 * D);

  // 2-frame regression: d[t] = sum_n n*(x[t+n]-x[t-n]) / (2*sum_n n^2),
  // indices clamped to the edges.
  auto delta_of = [&](auto&& value, int t, int d) {
    double num = 0.0;
    for (int n = 1; n <= 2; ++n) {
      const int hi = std::min(t + n, T - 1);
      const int lo = std::max(t - n, 0);
      num += n * (value(hi, d) - value(lo, d));
    }
    return num / 10.0;
  };

  auto statics = [&](int t, int d) {
    return static_cast<double>(seq.frames.at(t, d));
  };
  Tensor delta(T, D);
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < D; ++d) {
      delta.at(t, d) = static_cast<float>(delta_of(statics, t, d));
    }
  }
  auto delta_v = [&](int t, int d) {
    return static_cast<double>(delta.at(t, d));
  };
  for (int t = 0; t < T; ++t) {
    float* dst = out.frames.row(t);
    const float* src = seq.frames.row(t);
    std::copy(src, src + D, dst);
    std::copy(delta.row(t), delta.row(t) + D, dst + D);
    for (int d = 0; d < D; ++d) {
      dst[2 * D + d] = static_cast<float>(delta_of(delta_v, t, d));
    }
  }
  return out;
}

FeatureSequence normalize(const FeatureSequence& seq, const NormStats& stats) {
  if (seq.dim() != stats.dim()) {
    throw ShapeError("normalize: feature dim " + std::to_string(seq.dim()) +
                     " != stats dim " + std::to_string(stats.dim()));
  }
  FeatureSequence out = seq;
  for (int t = 0; t < seq.num_frames(); ++t) {
    float* row = out.frames.row(t);
    for (int d = 0; d < seq.dim(); ++d) {
      row[d] = (row[d] - stats.mean[d]) / std::max(stats.std[d], kStdFloor);
    }
  }
  return out;
}

FeatureSequence stack_and_skip(const FeatureSequence& seq) {
  const int T = seq.num_frames();
  const int D = seq.dim();
  FeatureSequence out;
  out.frame_period_ms = seq.frame_period_ms * 2.0f;
  const int T_out = (T + 1) / 2;
  out.frames = Tensor(T_out, 2 * D);
  for (int t = 0; t < T_out; ++t) {
    const int first = 2 * t;
    const int second = std::min(2 * t + 1, T - 1);
    float* dst = out.frames.row(t);
    std::copy(seq.frames.row(first), seq.frames.row(first) + D, dst);
    std::copy(seq.frames.row(second), seq.frames.row(second) + D, dst + D);
  }
  return out;
}

void NormStatsAccumulator::add(const FeatureSequence& seq) {
  const int D = seq.dim();
  if (sum_.empty()) {
    sum_.assign(D, 0.0);
    sumsq_.assign(D, 0.0);
  } else if (static_cast<int>(sum_.size()) != D) {
    throw ShapeError("norm stats: inconsistent feature dims");
  }
  for (int t = 0; t < seq.num_frames(); ++t) {
    const float* row = seq.frames.row(t);
    for (int d = 0; d < D; ++d) {
      sum_[d] += row[d];
      sumsq_[d] += static_cast<double>(row[d]) * row[d];
    }
    ++count_;
  }
}

NormStats NormStatsAccumulator::finalize() const {
  if (count_ == 0) throw EmptyInputError("norm stats over an empty corpus");
  NormStats stats;
  const int D = static_cast<int>(sum_.size());
  stats.mean.resize(D);
  stats.std.resize(D);
  for (int d = 0; d < D; ++d) {
    const double mean = sum_[d] / count_;
    const double var = std::max(sumsq_[d] / count_ - mean * mean, 0.0);
    stats.mean[d] = static_cast<float>(mean);
    stats.std[d] = std::max(static_cast<float>(std::sqrt(var)), kStdFloor);
  }
  return stats;
}

NormStats compute_norm_stats(const std::vector<FeatureSequence>& train_seqs) {
  NormStatsAccumulator acc;
  for (const auto& seq : train_seqs) acc.add(seq);
  return acc.finalize();
}

FeatureSequence feature_pipeline(const Waveform& wave, const NormStats& stats,
                                 const LogMelConfig& cfg) {
  return stack_and_skip(add_deltas(normalize(logmel(wave, cfg), stats)));
}

void write_feature_file(const std::string& path, const FeatureSequence& seq) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write("FMAT", 4);
  const uint32_t dim = static_cast<uint32_t>(seq.dim());
  const uint32_t frames = static_cast<uint32_t>(seq.num_frames());
  const float period = seq.frame_period_ms;
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&frames), 4);
  os.write(reinterpret_cast<const char*>(&period), 4);
  os.write(reinterpret_cast<const char*>(seq.frames.data.data()),
           static_cast<std::streamsize>(seq.frames.size() * sizeof(float)));
  if (!os) throw IoError("short write: " + path);
}

FeatureSequence read_feature_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "FMAT", 4) != 0) {
    throw IoError("bad feature file magic: " + path);
  }
  uint32_t dim = 0, frames = 0;
  float period = 0.0f;
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&frames), 4);
  is.read(reinterpret_cast<char*>(&period), 4);
  FeatureSequence seq;
  seq.frame_period_ms = period;
  seq.frames = Tensor(static_cast<int>(frames), static_cast<int>(dim));
  is.read(reinterpret_cast<char*>(seq.frames.data.data()),
          static_cast<std::streamsize>(seq.frames.size() * sizeof(float)));
  if (!is) throw IoError("truncated feature file: " + path);
  return seq;
}

void write_norm_stats(const std::string& path, const NormStats& stats) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write("NSTA", 4);
  const uint32_t dim = static_cast<uint32_t>(stats.dim());
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(stats.mean.data()), dim * 4);
  os.write(reinterpret_cast<const char*>(stats.std.data()), dim * 4);
  if (!os) throw IoError("short write: " + path);
}

NormStats read_norm_stats(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NSTA", 4) != 0) {
    throw IoError("bad norm stats magic: " + path);
  }
  uint32_t dim = 0;
  is.read(reinterpret_cast<char*>(&dim), 4);
  NormStats stats;
  stats.mean.resize(dim);
  stats.std.resize(dim);
  is.read(reinterpret_cast<char*>(stats.mean.data()), dim * 4);
  is.read(reinterpret_cast<char*>(stats.std.data()), dim * 4);
  if (!is) throw IoError("truncated norm stats: " + path);
  return stats;
}

}  // namespace dialslu
