// dialslu/nn/tape.h

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

#ifndef DIALSLU_NN_TAPE_H_
#define DIALSLU_NN_TAPE_H_

#include <deque>
#include <functional>
#include <vector>

#include "dialslu/nn/param.h"
#include "dialslu/util/tensor.h"

namespace dialslu {
namespace nn {

// Reverse-mode tape over row-major float matrices. One tape per forward pass;
// ops append nodes, backward() walks them in reverse creation order and
// accumulates parameter gradients into the owning Params.
//
// Recurrent layers and the transducer joint are fused ops (one node per
// layer) with hand-written backward passes, so tapes stay short and the gemm
// kernels see full sequences.
class Tape {
 public:
  using Var = int;
  static constexpr Var kNone = -1;

  Var leaf(Tensor value);
  Var param(Param& p);

  const Tensor& val(Var v) const { return *nodes_[v].vptr; }
  Tensor& grad(Var v) { return nodes_[v].grad; }

  // C = A * B, shapes (m,k) x (k,n).
  Var matmul(Var a, Var b);
  // C = A * B^T, shapes (m,k) x (n,k). Linear layers store weights as
  // (out, in), so this is y = x W^T.
  Var matmul_nt(Var a, Var b);
  Var add(Var a, Var b);
  // Adds a (1,n) row vector to every row of a (m,n) matrix.
  Var add_row(Var a, Var row);
  Var mul(Var a, Var b);
  Var scale(Var a, float s);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var gelu(Var a);
  // Per-row layer norm with learned gain and bias, both (1,n).
  Var layer_norm(Var x, Param& gain, Param& bias, float eps = 1e-5f);
  Var softmax_rows(Var scores);
  Var log_softmax_rows(Var logits);
  Var slice_cols(Var a, int c0, int c1);
  Var concat_cols(const std::vector<Var>& parts);
  Var pick_row(Var a, int row);
  // Gathers rows of an embedding table; backward scatter-adds into the table.
  Var embedding(Param& table, const std::vector<int>& ids);

  // Fused unidirectional LSTM layer: x (T, In) -> (T, H). Gate layout
  // [i f g o], H = wh.cols. reverse=true runs right to left but keeps row t
  // aligned with input row t.
  Var lstm(Var x, Param& wx, Param& wh, Param& b, bool reverse);

  // Transducer joint over a whole lattice: log-softmax(W tanh(henc_t (*)
  // hpred_u) + b) for every (t, u), flattened to (T*U1, V) with u fastest.
  Var joint_lattice(Var henc, Var hpred, Param& w_out, Param& b_out);

  // -log softmax(logits)[label]; logits is (1, C).
  Var softmax_cross_entropy(Var logits, int label);
  // Sum over classes of binary cross entropy on sigmoid(logits); logits and
  // targets are (1, C).
  Var sigmoid_cross_entropy(Var logits, const std::vector<float>& targets);

  // Custom node: the caller supplies the forward value and a backward
  // callback that reads grad(self) and accumulates into earlier vars/params.
  Var custom(Tensor value, std::function<void(Tape&, Var)> backward_fn);

  // Seeds d(loss)=1 and runs every backward callback in reverse order.
  void backward(Var loss);

  double scalar(Var v) const { return val(v).at(0, 0); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* vptr = nullptr;
    Tensor grad;
    std::function<void()> back;
    Param* p = nullptr;
  };

  Var push(Tensor value) {
    nodes_.emplace_back();
    Node& n = nodes_.back();
    n.owned = std::move(value);
    n.vptr = &n.owned;
    n.grad = Tensor(n.owned.rows, n.owned.cols);
    return static_cast<Var>(nodes_.size()) - 1;
  }

  std::deque<Node> nodes_;
};

// Materialized transpose, used by several backward passes.
Tensor transposed(const Tensor& a);

}  // namespace nn
}  // namespace dialslu

#endif  // DIALSLU_NN_TAPE_H_
