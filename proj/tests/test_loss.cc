// tests/test_loss.cc

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
#include <limits>

#include "dialslu/transducer/loss.h"
#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"
#include "oracles.h"

using namespace dialslu;

namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();

Lattice make_lattice(Tensor lp, int T, std::vector<int> target, int blank) {
  Lattice lat;
  lat.log_probs = std::move(lp);
  lat.num_frames = T;
  lat.target = std::move(target);
  lat.blank = blank;
  return lat;
}

Lattice random_lattice(Rng& rng, int T, int U, int V, int blank) {
  std::vector<int> target;
  for (int u = 0; u < U; ++u) {
    int label = rng.uniform_int(0, V - 2);
    if (label >= blank) ++label;
    target.push_back(label);
  }
  return make_lattice(oracles::random_log_dist(rng, T * (U + 1), V), T,
                      std::move(target), blank);
}

}  // namespace

TEST_CASE("rnnt_loss: single forced alignment T=1 U=0") {
  Tensor lp(1, 2);
  lp.at(0, 0) = std::log(0.5f);
  lp.at(0, 1) = std::log(0.5f);
  const auto res = rnnt_loss(make_lattice(lp, 1, {}, 0));
  CHECK(res.loss == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("rnnt_loss: T=2 U=1 uniform V=3 equals ln(27/2)") {
  const float u = std::log(1.0f / 3.0f);
  Tensor lp(4, 3);
  for (auto& v : lp.data) v = u;
  const auto res = rnnt_loss(make_lattice(lp, 2, {1}, 0));
  CHECK(res.loss == doctest::Approx(std::log(27.0 / 2.0)).epsilon(1e-6));
}

TEST_CASE("rnnt_loss: unreachable label gives +inf loss") {
  Rng rng(3);
  auto lat = random_lattice(rng, 3, 2, 4, 0);
  // First target label impossible everywhere.
  const int y0 = lat.target[0];
  for (int r = 0; r < lat.log_probs.rows; ++r) lat.log_probs.at(r, y0) = -kInf;
  const auto res = rnnt_loss(lat);
  CHECK(std::isinf(res.loss));
  CHECK(res.loss > 0);
}

TEST_CASE("rnnt_loss: structural errors") {
  Tensor lp(0, 3);
  CHECK_THROWS_AS(rnnt_loss(make_lattice(lp, 0, {1}, 0)), AlignmentError);
  // Blank in the target is invalid.
  Tensor lp2(2, 3);
  CHECK_THROWS_AS(rnnt_loss(make_lattice(lp2, 1, {0}, 0)), DomainError);
  // NaN input.
  Tensor lp3(1, 3);
  lp3.at(0, 1) = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(rnnt_loss(make_lattice(lp3, 1, {}, 0)), NumericError);
}

TEST_CASE("rnnt_loss matches alignment enumeration on random lattices") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int T = rng.uniform_int(1, 4);
    const int U = rng.uniform_int(0, 3);
    const int V = rng.uniform_int(2, 4);
    const int blank = rng.uniform_int(0, V - 1);
    const auto lat = random_lattice(rng, T, U, V, blank);
    const auto res = rnnt_loss(lat);
    const double oracle =
        -oracles::rnnt_enumerate(lat.log_probs, T, lat.target, blank);
    CHECK(std::abs(res.loss - oracle) < 1e-6);
  }
}

TEST_CASE("rnnt_loss blank-extension invariance") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int T = rng.uniform_int(1, 4);
    const int U = rng.uniform_int(0, 3);
    const int V = 4;
    auto lat = random_lattice(rng, T, U, V, 0);
    const double base = rnnt_loss(lat).loss;

    // Append a frame whose distribution is all blank.
    Lattice ext = lat;
    ext.num_frames = T + 1;
    ext.log_probs = Tensor((T + 1) * (U + 1), V);
    std::copy(lat.log_probs.data.begin(), lat.log_probs.data.end(),
              ext.log_probs.data.begin());
    for (int u = 0; u <= U; ++u) {
      float* row = ext.log_probs.row(T * (U + 1) + u);
      for (int v = 0; v < V; ++v) row[v] = v == 0 ? 0.0f : -kInf;
    }
    CHECK(rnnt_loss(ext).loss == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("rnnt_loss gradient matches central finite differences") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int T = rng.uniform_int(1, 3);
    const int U = rng.uniform_int(0, 2);
    const int V = 3;
    auto lat = random_lattice(rng, T, U, V, 0);
    const auto res = rnnt_loss(lat);
    for (size_t i = 0; i < lat.log_probs.size(); ++i) {
      const double fd = oracles::central_difference(
          lat.log_probs, i, 1e-4, [&]() { return rnnt_loss(lat).loss; });
      const double an = res.grad.data[i];
      CHECK(oracles::relative_error(fd, an) < 1e-4);
    }
  }
}

TEST_CASE("ctc_loss: single path T=1") {
  Tensor lp(1, 2);
  lp.at(0, 0) = std::log(0.75f);
  lp.at(0, 1) = std::log(0.25f);
  const auto res = ctc_loss(lp, {1}, 0);
  CHECK(res.loss == doctest::Approx(std::log(4.0)).epsilon(1e-6));
}

TEST_CASE("ctc_loss: T=2 uniform binary alphabet, target 'a'") {
  Tensor lp(2, 2);
  for (auto& v : lp.data) v = std::log(0.5f);
  const auto res = ctc_loss(lp, {1}, 0);
  CHECK(res.loss == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("ctc_loss: empty target sums blank log-probs") {
  Rng rng(13);
  const auto lp = oracles::random_log_dist(rng, 5, 3);
  const auto res = ctc_loss(lp, {}, 1);
  double expect = 0.0;
  for (int t = 0; t < 5; ++t) expect -= lp.at(t, 1);
  CHECK(res.loss == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("ctc_loss: too few frames raises") {
  Tensor lp(2, 3);
  CHECK_THROWS_AS(ctc_loss(lp, {1, 2, 1}, 0), AlignmentError);
  // Repeated labels need a separating frame.
  Tensor lp2(2, 3);
  CHECK_THROWS_AS(ctc_loss(lp2, {1, 1}, 0), AlignmentError);
  Tensor lp3(3, 3);
  CHECK_NOTHROW(ctc_loss(lp3, {1, 1}, 0));
}

TEST_CASE("ctc_loss matches path enumeration on random inputs") {
  Rng rng(17);
  int done = 0;
  while (done < 300) {
    const int T = rng.uniform_int(1, 4);
    const int U = rng.uniform_int(0, 3);
    const int V = rng.uniform_int(2, 4);
    const int blank = rng.uniform_int(0, V - 1);
    std::vector<int> target;
    for (int u = 0; u < U; ++u) {
      int label = rng.uniform_int(0, V - 2);
      if (label >= blank) ++label;
      target.push_back(label);
    }
    int min_frames = U;
    for (int u = 1; u < U; ++u) {
      if (target[u] == target[u - 1]) ++min_frames;
    }
    if (T < min_frames) continue;
    const auto lp = oracles::random_log_dist(rng, T, V);
    const auto res = ctc_loss(lp, target, blank);
    const double oracle = -oracles::ctc_enumerate(lp, target, blank);
    CHECK(std::abs(res.loss - oracle) < 1e-6);
    ++done;
  }
}

TEST_CASE("ctc_loss gradient matches central finite differences") {
  Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const int T = rng.uniform_int(2, 4);
    const int U = rng.uniform_int(0, 2);
    const int V = 3;
    const int blank = 0;
    std::vector<int> target;
    for (int u = 0; u < U; ++u) target.push_back(rng.uniform_int(1, V - 1));
    int min_frames = U;
    for (int u = 1; u < U; ++u) {
      if (target[u] == target[u - 1]) ++min_frames;
    }
    if (T < min_frames) continue;
    auto lp = oracles::random_log_dist(rng, T, V);
    const auto res = ctc_loss(lp, target, blank);
    for (size_t i = 0; i < lp.size(); ++i) {
      const double fd = oracles::central_difference(
          lp, i, 1e-4, [&]() { return ctc_loss(lp, target, blank).loss; });
      const double an = res.grad.data[i];
      CHECK(oracles::relative_error(fd, an) < 1e-4);
    }
  }
}
