// dialslu/transducer/loss.cc

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

#include "dialslu/transducer/loss.h"

#include <cmath>
#include <limits>

#include "dialslu/kernels/kernels.h"
#include "dialslu/util/errors.h"

namespace dialslu {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using kernels::logsumexp2;

void check_finite_or_neg_inf(const Tensor& lp) {
  for (float v : lp.data) {
    if (std::isnan(v) || v == std::numeric_limits<float>::infinity()) {
      throw NumericError("log-probabilities must be finite or -inf");
    }
  }
}

}  // namespace

LossResult rnnt_loss(const Lattice& lattice) {
  return rnnt_loss(lattice.log_probs, lattice.num_frames, lattice.target,
                   lattice.blank);
}

LossResult rnnt_loss(const Tensor& log_probs, int num_frames,
                     const std::vector<int>& target, int blank) {
  const int T = num_frames;
  const int U = static_cast<int>(target.size());
  const int U1 = U + 1;
  const int V = log_probs.cols;

  if (T == 0) {
    if (U > 0) {
      throw AlignmentError("rnnt: labels cannot be emitted without frames");
    }
    LossResult res;
    res.grad = Tensor(0, V);
    return res;  // empty product, probability one
  }
  if (log_probs.rows != T * U1) {
    throw ShapeError("rnnt: lattice rows != T*(U+1)");
  }
  for (int label : target) {
    if (label < 0 || label >= V || label == blank) {
      throw DomainError("rnnt: target labels must be valid non-blank indices");
    }
  }
  check_finite_or_neg_inf(log_probs);

  auto lp = [&](int t, int u, int v) -> double {
    return log_probs.at(t * U1 + u, v);
  };

  std::vector<double> alpha(static_cast<size_t>(T) * U1, kNegInf);
  auto a = [&](int t, int u) -> double& { return alpha[t * U1 + u]; };
  a(0, 0) = 0.0;
  for (int t = 1; t < T; ++t) a(t, 0) = a(t - 1, 0) + lp(t - 1, 0, blank);
  for (int u = 1; u <= U; ++u) {
    a(0, u) = a(0, u - 1) + lp(0, u - 1, target[u - 1]);
  }
  for (int t = 1; t < T; ++t) {
    for (int u = 1; u <= U; ++u) {
      a(t, u) = logsumexp2(a(t - 1, u) + lp(t - 1, u, blank),
                           a(t, u - 1) + lp(t, u - 1, target[u - 1]));
    }
  }
  const double log_z = a(T - 1, U) + lp(T - 1, U, blank);

  LossResult res;
  res.grad = Tensor(T * U1, V);
  if (!std::isfinite(log_z)) {
    // No alignment carries probability mass; the loss is +inf and the
    // gradient is left at zero (absorbing semantics).
    res.loss = std::numeric_limits<double>::infinity();
    return res;
  }

  std::vector<double> beta(static_cast<size_t>(T) * U1, kNegInf);
  auto bt = [&](int t, int u) -> double& { return beta[t * U1 + u]; };
  bt(T - 1, U) = lp(T - 1, U, blank);
  for (int t = T - 2; t >= 0; --t) bt(t, U) = lp(t, U, blank) + bt(t + 1, U);
  for (int u = U - 1; u >= 0; --u) {
    bt(T - 1, u) = lp(T - 1, u, target[u]) + bt(T - 1, u + 1);
  }
  for (int t = T - 2; t >= 0; --t) {
    for (int u = U - 1; u >= 0; --u) {
      bt(t, u) = logsumexp2(lp(t, u, blank) + bt(t + 1, u),
                            lp(t, u, target[u]) + bt(t, u + 1));
    }
  }

  res.loss = -log_z;
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      float* g = res.grad.row(t * U1 + u);
      const double base = a(t, u) - log_z;
      // blank arc: t -> t+1 (exits the lattice from (T-1, U))
      if (t < T - 1) {
        const double occ = base + lp(t, u, blank) + bt(t + 1, u);
        g[blank] = static_cast<float>(-std::exp(occ));
      } else if (u == U) {
        g[blank] = static_cast<float>(-std::exp(base + lp(t, u, blank)));
      }
      // label arc: u -> u+1
      if (u < U) {
        const int y = target[u];
        const double occ = base + lp(t, u, y) + bt(t, u + 1);
        g[y] += static_cast<float>(-std::exp(occ));
      }
    }
  }
  return res;
}

LossResult ctc_loss(const Tensor& frame_log_probs,
                    const std::vector<int>& target, int blank) {
  const int T = frame_log_probs.rows;
  const int V = frame_log_probs.cols;
  const int U = static_cast<int>(target.size());

  for (int label : target) {
    if (label < 0 || label >= V || label == blank) {
      throw DomainError("ctc: target labels must be valid non-blank indices");
    }
  }
  check_finite_or_neg_inf(frame_log_probs);

  // Minimum frames: one per label plus one separator per repeated pair.
  int min_frames = U;
  for (int u = 1; u < U; ++u) {
    if (target[u] == target[u - 1]) ++min_frames;
  }
  if (T < min_frames) {
    throw AlignmentError("ctc: too few frames for the target sequence");
  }
  LossResult res;
  res.grad = Tensor(T, V);
  if (T == 0) return res;  // empty target over zero frames

  const int S = 2 * U + 1;
  std::vector<int> expanded(S);
  for (int s = 0; s < S; ++s) {
    expanded[s] = (s % 2 == 0) ? blank : target[(s - 1) / 2];
  }
  auto allow_skip = [&](int s) {
    return s >= 2 && expanded[s] != blank && expanded[s] != expanded[s - 2];
  };
  auto lp = [&](int t, int v) -> double { return frame_log_probs.at(t, v); };

  // alpha includes the emission at t; beta excludes it.
  std::vector<double> alpha(static_cast<size_t>(T) * S, kNegInf);
  auto a = [&](int t, int s) -> double& { return alpha[t * S + s]; };
  a(0, 0) = lp(0, expanded[0]);
  if (S > 1) a(0, 1) = lp(0, expanded[1]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double acc = a(t - 1, s);
      if (s >= 1) acc = logsumexp2(acc, a(t - 1, s - 1));
      if (allow_skip(s)) acc = logsumexp2(acc, a(t - 1, s - 2));
      a(t, s) = acc + lp(t, expanded[s]);
    }
  }
  double log_z = a(T - 1, S - 1);
  if (S > 1) log_z = logsumexp2(log_z, a(T - 1, S - 2));

  if (!std::isfinite(log_z)) {
    res.loss = std::numeric_limits<double>::infinity();
    return res;
  }

  std::vector<double> beta(static_cast<size_t>(T) * S, kNegInf);
  auto b = [&](int t, int s) -> double& { return beta[t * S + s]; };
  b(T - 1, S - 1) = 0.0;
  if (S > 1) b(T - 1, S - 2) = 0.0;
  for (int t = T - 2; t >= 0; --t) {
    for (int s = S - 1; s >= 0; --s) {
      double acc = lp(t + 1, expanded[s]) + b(t + 1, s);
      if (s + 1 < S) {
        acc = logsumexp2(acc, lp(t + 1, expanded[s + 1]) + b(t + 1, s + 1));
      }
      if (s + 2 < S && allow_skip(s + 2)) {
        acc = logsumexp2(acc, lp(t + 1, expanded[s + 2]) + b(t + 1, s + 2));
      }
      b(t, s) = acc;
    }
  }

  res.loss = -log_z;
  for (int t = 0; t < T; ++t) {
    float* g = res.grad.row(t);
    for (int s = 0; s < S; ++s) {
      const double occ = a(t, s) + b(t, s) - log_z;
      if (occ == kNegInf) continue;
      g[expanded[s]] += static_cast<float>(-std::exp(occ));
    }
  }
  return res;
}

}  // namespace dialslu
