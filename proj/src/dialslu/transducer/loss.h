// dialslu/transducer/loss.h

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

#ifndef DIALSLU_TRANSDUCER_LOSS_H_
#define DIALSLU_TRANSDUCER_LOSS_H_

#include <vector>

#include "dialslu/util/tensor.h"

namespace dialslu {

// T x (U+1) grid of output log-distributions, flattened to (T*(U+1), V)
// rows with u fastest. Row (t, u) is the joint output after consuming t
// frames and u target labels.
struct Lattice {
  Tensor log_probs;
  int num_frames = 0;       // T
  std::vector<int> target;  // U non-blank label indices
  int blank = 0;

  int num_labels() const { return static_cast<int>(target.size()); }
  int vocab_size() const { return log_probs.cols; }
  const float* node(int t, int u) const {
    return log_probs.row(t * (num_labels() + 1) + u);
  }
};

struct LossResult {
  double loss = 0.0;  // negative log-likelihood
  Tensor grad;        // d loss / d log_probs, same shape as the input
};

// Transducer negative log-likelihood by the log-space forward recursion
// alpha(t,u) = lse(alpha(t-1,u) + lp_blank(t-1,u),
//                  alpha(t,u-1) + lp_label(t,u-1)),
// loss = -(alpha(T-1,U) + lp_blank(T-1,U)). The gradient is the analytic
// forward-backward arc occupancy, valid for arbitrary finite log_probs
// (normalized or not). -inf entries are legal and absorbing; NaN or +inf
// raise NumericError.
LossResult rnnt_loss(const Lattice& lattice);
LossResult rnnt_loss(const Tensor& log_probs, int num_frames,
                     const std::vector<int>& target, int blank);

// CTC negative log-likelihood over the blank-interleaved expansion of
// target, with the standard skip transitions. frame_log_probs is (T, V).
LossResult ctc_loss(const Tensor& frame_log_probs,
                    const std::vector<int>& target, int blank);

}  // namespace dialslu

#endif  // DIALSLU_TRANSDUCER_LOSS_H_
