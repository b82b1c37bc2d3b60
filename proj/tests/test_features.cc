// tests/test_features.cc

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
#include <vector>

#include "dialslu/features/features.h"
#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"

using namespace dialslu;

namespace {

Waveform tone(double freq_hz, double seconds, int sr = 16000) {
  Waveform w;
  w.sample_rate = sr;
  const int n = static_cast<int>(seconds * sr);
  w.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    w.samples[i] =
        static_cast<float>(0.5 * std::sin(2.0 * M_PI * freq_hz * i / sr));
  }
  return w;
}

Waveform random_wave(Rng& rng, int n) {
  Waveform w;
  w.samples.resize(n);
  rng.fill_uniform(w.samples.data(), n, -0.5f, 0.5f);
  return w;
}

FeatureSequence random_seq(Rng& rng, int frames, int dim) {
  FeatureSequence s;
  s.frames = Tensor(frames, dim);
  rng.fill_uniform(s.frames.data.data(), frames * dim, -2.0f, 2.0f);
  return s;
}

}  // namespace

TEST_CASE("logmel framing: one second gives 98 frames of dim 40") {
  Rng rng(1);
  auto feats = logmel(random_wave(rng, 16000));
  CHECK(feats.num_frames() == 98);
  CHECK(feats.dim() == 40);
  CHECK(feats.frame_period_ms == 10.0f);
}

TEST_CASE("logmel rejects waveforms shorter than one window") {
  Rng rng(2);
  CHECK_THROWS_AS(logmel(random_wave(rng, 399)), EmptyInputError);
  CHECK_NOTHROW(logmel(random_wave(rng, 400)));
}

TEST_CASE("logmel of silence: all frames equal the floor constant") {
  Waveform w;
  w.samples.assign(16000, 0.0f);
  auto feats = logmel(w);
  for (int t = 0; t < feats.num_frames(); ++t) {
    for (int d = 0; d < feats.dim(); ++d) {
      CHECK(feats.frames.at(t, d) == feats.frames.at(0, 0));
    }
  }
}

TEST_CASE("pure 1 kHz tone peaks in the filter whose center is nearest 1 kHz") {
  auto feats = logmel(tone(1000.0, 1.0));

  // Independent center computation from the mel-spacing definition.
  auto hz_to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  auto mel_to_hz = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };
  const double mel_hi = hz_to_mel(8000.0);
  int nearest = -1;
  double best = 1e9;
  for (int m = 0; m < 40; ++m) {
    const double center = mel_to_hz(mel_hi * (m + 1) / 41.0);
    if (std::abs(center - 1000.0) < best) {
      best = std::abs(center - 1000.0);
      nearest = m;
    }
  }

  // Average over frames, then argmax channel.
  std::vector<double> mean(40, 0.0);
  for (int t = 0; t < feats.num_frames(); ++t) {
    for (int d = 0; d < 40; ++d) mean[d] += feats.frames.at(t, d);
  }
  int argmax = 0;
  for (int d = 1; d < 40; ++d) {
    if (mean[d] > mean[argmax]) argmax = d;
  }
  CHECK(argmax == nearest);
}

TEST_CASE("add_deltas: constant input gives zero delta blocks") {
  FeatureSequence s;
  s.frames = Tensor(6, 40);
  s.frames.fill(2.5f);
  auto out = add_deltas(s);
  CHECK(out.dim() == 120);
  for (int t = 0; t < 6; ++t) {
    for (int d = 40; d < 120; ++d) CHECK(out.frames.at(t, d) == 0.0f);
  }
}

TEST_CASE("add_deltas: linear ramp gives constant delta, zero delta-delta interior") {
  FeatureSequence s;
  s.frames = Tensor(10, 2);
  for (int t = 0; t < 10; ++t) {
    s.frames.at(t, 0) = 0.5f * t;
    s.frames.at(t, 1) = -1.0f * t;
  }
  auto out = add_deltas(s);
  for (int t = 2; t < 8; ++t) {
    CHECK(out.frames.at(t, 2) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(out.frames.at(t, 3) == doctest::Approx(-1.0).epsilon(1e-6));
  }
  for (int t = 4; t < 6; ++t) {
    CHECK(out.frames.at(t, 4) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(out.frames.at(t, 5) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("add_deltas matches the direct regression formula on random input") {
  Rng rng(3);
  auto s = random_seq(rng, 6, 5);
  auto out = add_deltas(s);

  const int T = 6, D = 5;
  auto clamp = [&](int t) { return std::min(std::max(t, 0), T - 1); };
  // First-order deltas, as floats, exactly as a direct implementation
  // would produce them.
  Tensor delta(T, D);
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < D; ++d) {
      double num = 0.0;
      for (int n = 1; n <= 2; ++n) {
        num += n * (static_cast<double>(s.frames.at(clamp(t + n), d)) -
                    s.frames.at(clamp(t - n), d));
      }
      delta.at(t, d) = static_cast<float>(num / 10.0);
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < D; ++d) {
      CHECK(std::abs(out.frames.at(t, D + d) - delta.at(t, d)) < 1e-10);
      double num = 0.0;
      for (int n = 1; n <= 2; ++n) {
        num += n * (static_cast<double>(delta.at(clamp(t + n), d)) -
                    delta.at(clamp(t - n), d));
      }
      CHECK(std::abs(out.frames.at(t, 2 * D + d) -
                     static_cast<float>(num / 10.0)) < 1e-10);
    }
  }
}

TEST_CASE("normalize centers and scales") {
  Rng rng(4);
  NormStats stats;
  stats.mean = {1.0f, -2.0f, 3.0f};
  stats.std = {2.0f, 0.5f, 1.0f};

  FeatureSequence s;
  s.frames = Tensor(4, 3);
  for (int t = 0; t < 4; ++t) {
    for (int d = 0; d < 3; ++d) s.frames.at(t, d) = stats.mean[d];
  }
  auto z = normalize(s, stats);
  for (int t = 0; t < 4; ++t) {
    for (int d = 0; d < 3; ++d) CHECK(z.frames.at(t, d) == 0.0f);
  }

  // Stats from a one-sequence corpus standardize that sequence.
  auto r = random_seq(rng, 50, 3);
  auto rs = compute_norm_stats({r});
  auto rz = normalize(r, rs);
  for (int d = 0; d < 3; ++d) {
    double mean = 0.0, var = 0.0;
    for (int t = 0; t < 50; ++t) mean += rz.frames.at(t, d);
    mean /= 50;
    for (int t = 0; t < 50; ++t) {
      var += (rz.frames.at(t, d) - mean) * (rz.frames.at(t, d) - mean);
    }
    var /= 50;
    CHECK(std::abs(mean) < 1e-6);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-5));
  }

  // Identity stats leave a normalized sequence unchanged.
  NormStats identity;
  identity.mean.assign(3, 0.0f);
  identity.std.assign(3, 1.0f);
  auto twice = normalize(rz, identity);
  for (size_t i = 0; i < twice.frames.data.size(); ++i) {
    CHECK(twice.frames.data[i] == rz.frames.data[i]);
  }

  NormStats bad;
  bad.mean.assign(2, 0.0f);
  bad.std.assign(2, 1.0f);
  CHECK_THROWS_AS(normalize(r, bad), ShapeError);
}

TEST_CASE("stack_and_skip shapes and padding") {
  Rng rng(5);
  auto even = random_seq(rng, 10, 120);
  even.frame_period_ms = 10.0f;
  auto se = stack_and_skip(even);
  CHECK(se.num_frames() == 5);
  CHECK(se.dim() == 240);
  CHECK(se.frame_period_ms == 20.0f);
  for (int d = 0; d < 120; ++d) {
    CHECK(se.frames.at(0, d) == even.frames.at(0, d));
    CHECK(se.frames.at(0, 120 + d) == even.frames.at(1, d));
  }

  auto odd = random_seq(rng, 11, 120);
  auto so = stack_and_skip(odd);
  CHECK(so.num_frames() == 6);
  for (int d = 0; d < 120; ++d) {
    CHECK(so.frames.at(5, d) == odd.frames.at(10, d));
    CHECK(so.frames.at(5, 120 + d) == odd.frames.at(10, d));
  }

  FeatureSequence empty;
  empty.frames = Tensor(0, 120);
  CHECK(stack_and_skip(empty).num_frames() == 0);
}

TEST_CASE("compute_norm_stats: floor, pooling oracle, order invariance") {
  FeatureSequence constant;
  constant.frames = Tensor(7, 2);
  constant.frames.fill(3.0f);
  auto floored = compute_norm_stats({constant});
  CHECK(floored.std[0] == 1e-8f);
  CHECK(floored.mean[0] == doctest::Approx(3.0));

  Rng rng(6);
  auto a = random_seq(rng, 13, 4);
  auto b = random_seq(rng, 29, 4);
  auto stats = compute_norm_stats({a, b});

  // Independent two-pass oracle.
  for (int d = 0; d < 4; ++d) {
    double sum = 0.0;
    int count = 0;
    for (auto* s : {&a, &b}) {
      for (int t = 0; t < s->num_frames(); ++t) {
        sum += s->frames.at(t, d);
        ++count;
      }
    }
    const double mean = sum / count;
    double ss = 0.0;
    for (auto* s : {&a, &b}) {
      for (int t = 0; t < s->num_frames(); ++t) {
        const double diff = s->frames.at(t, d) - mean;
        ss += diff * diff;
      }
    }
    const double stddev = std::sqrt(ss / count);
    CHECK(stats.mean[d] == doctest::Approx(mean).epsilon(1e-6));
    CHECK(stats.std[d] == doctest::Approx(stddev).epsilon(1e-5));
  }

  auto swapped = compute_norm_stats({b, a});
  for (int d = 0; d < 4; ++d) {
    CHECK(stats.mean[d] == doctest::Approx(swapped.mean[d]).epsilon(1e-7));
    CHECK(stats.std[d] == doctest::Approx(swapped.std[d]).epsilon(1e-7));
  }

  CHECK_THROWS_AS(compute_norm_stats({}), EmptyInputError);
}

TEST_CASE("pipeline shape law and static-block recovery") {
  Rng rng(7);
  NormStats stats;
  stats.mean.assign(40, 0.1f);
  stats.std.assign(40, 1.3f);
  for (int i = 0; i < 20; ++i) {
    const int n = 400 + rng.uniform_int(0, 32000);
    auto w = random_wave(rng, n);
    auto out = feature_pipeline(w, stats);
    const int frames10 = (n - 400) / 160 + 1;
    CHECK(out.dim() == 240);
    CHECK(out.num_frames() == (frames10 + 1) / 2);
    for (float v : out.frames.data) CHECK(std::isfinite(v));
  }

  // add_deltas keeps the static block bit-exact.
  auto s = random_seq(rng, 9, 40);
  auto d = add_deltas(s);
  for (int t = 0; t < 9; ++t) {
    for (int k = 0; k < 40; ++k) {
      CHECK(d.frames.at(t, k) == s.frames.at(t, k));
    }
  }
}

TEST_CASE("feature file round trip") {
  Rng rng(8);
  auto s = random_seq(rng, 12, 240);
  s.frame_period_ms = 20.0f;
  const std::string path = "test_features_tmp.fmat";
  write_feature_file(path, s);
  auto r = read_feature_file(path);
  CHECK(r.num_frames() == 12);
  CHECK(r.dim() == 240);
  CHECK(r.frame_period_ms == 20.0f);
  CHECK(r.frames.data == s.frames.data);
  std::remove(path.c_str());

  NormStats stats;
  stats.mean.assign(40, 0.25f);
  stats.std.assign(40, 0.5f);
  write_norm_stats("test_stats_tmp.bin", stats);
  auto rs = read_norm_stats("test_stats_tmp.bin");
  CHECK(rs.mean == stats.mean);
  CHECK(rs.std == stats.std);
  std::remove("test_stats_tmp.bin");
}
