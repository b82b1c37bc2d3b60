// dialslu/nn/tape.cc

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

#include "dialslu/nn/tape.h"

#include <cmath>
#include <memory>

#include "dialslu/kernels/kernels.h"
#include "dialslu/util/errors.h"

namespace dialslu {
namespace nn {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch");
  }
}

void add_into(Tensor& dst, const Tensor& src) {
  kernels::axpy(1.0f, src.data.data(), dst.data.data(),
                static_cast<int>(dst.size()));
}

Tensor colsum(const Tensor& a) {
  Tensor out(1, a.cols);
  for (int i = 0; i < a.rows; ++i) {
    kernels::axpy(1.0f, a.row(i), out.row(0), a.cols);
  }
  return out;
}

}  // namespace

Tensor transposed(const Tensor& a) {
  Tensor t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i) {
    const float* src = a.row(i);
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = src[j];
  }
  return t;
}

Tape::Var Tape::leaf(Tensor value) { return push(std::move(value)); }

Tape::Var Tape::param(Param& p) {
  nodes_.emplace_back();
  Node& n = nodes_.back();
  n.vptr = &p.value;
  n.grad = Tensor(p.value.rows, p.value.cols);
  n.p = &p;
  const Var id = static_cast<Var>(nodes_.size()) - 1;
  n.back = [this, id]() { add_into(nodes_[id].p->grad, nodes_[id].grad); };
  return id;
}

Tape::Var Tape::matmul(Var a, Var b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  if (A.cols != B.rows) throw ShapeError("matmul: inner dims differ");
  Tensor C(A.rows, B.cols);
  kernels::gemm(A.rows, B.cols, A.cols, A.data.data(), A.cols, B.data.data(),
                B.cols, C.data.data(), C.cols, false);
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, b]() {
    const Tensor& dC = nodes_[id].grad;
    const Tensor& A2 = val(a);
    const Tensor& B2 = val(b);
    const Tensor Bt = transposed(B2);
    kernels::gemm(A2.rows, A2.cols, B2.cols, dC.data.data(), dC.cols,
                  Bt.data.data(), Bt.cols, grad(a).data.data(), A2.cols, true);
    const Tensor At = transposed(A2);
    kernels::gemm(B2.rows, B2.cols, A2.rows, At.data.data(), At.cols,
                  dC.data.data(), dC.cols, grad(b).data.data(), B2.cols, true);
  };
  return id;
}

Tape::Var Tape::matmul_nt(Var a, Var b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  if (A.cols != B.cols) throw ShapeError("matmul_nt: inner dims differ");
  Tensor C(A.rows, B.rows);
  for (int i = 0; i < A.rows; ++i) {
    kernels::gemv(B.rows, B.cols, B.data.data(), B.cols, A.row(i), C.row(i),
                  false);
  }
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, b]() {
    const Tensor& dC = nodes_[id].grad;  // (m, n)
    const Tensor& A2 = val(a);           // (m, k)
    const Tensor& B2 = val(b);           // (n, k)
    // dA += dC * B
    kernels::gemm(A2.rows, A2.cols, B2.rows, dC.data.data(), dC.cols,
                  B2.data.data(), B2.cols, grad(a).data.data(), A2.cols, true);
    // dB += dC^T * A
    const Tensor dCt = transposed(dC);
    kernels::gemm(B2.rows, B2.cols, A2.rows, dCt.data.data(), dCt.cols,
                  A2.data.data(), A2.cols, grad(b).data.data(), B2.cols, true);
  };
  return id;
}

Tape::Var Tape::add(Var a, Var b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_same_shape(A, B, "add");
  Tensor C = A;
  add_into(C, B);
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, b]() {
    add_into(grad(a), nodes_[id].grad);
    add_into(grad(b), nodes_[id].grad);
  };
  return id;
}

Tape::Var Tape::add_row(Var a, Var row) {
  const Tensor& A = val(a);
  const Tensor& R = val(row);
  if (R.rows != 1 || R.cols != A.cols) {
    throw ShapeError("add_row: row must be (1, cols)");
  }
  Tensor C = A;
  for (int i = 0; i < C.rows; ++i) {
    kernels::axpy(1.0f, R.row(0), C.row(i), C.cols);
  }
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, row]() {
    const Tensor& dC = nodes_[id].grad;
    add_into(grad(a), dC);
    const Tensor cs = colsum(dC);
    add_into(grad(row), cs);
  };
  return id;
}

Tape::Var Tape::mul(Var a, Var b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_same_shape(A, B, "mul");
  Tensor C(A.rows, A.cols);
  for (size_t i = 0; i < C.size(); ++i) C.data[i] = A.data[i] * B.data[i];
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, b]() {
    const Tensor& dC = nodes_[id].grad;
    const Tensor& A2 = val(a);
    const Tensor& B2 = val(b);
    Tensor& dA = grad(a);
    Tensor& dB = grad(b);
    for (size_t i = 0; i < dC.size(); ++i) {
      dA.data[i] += dC.data[i] * B2.data[i];
      dB.data[i] += dC.data[i] * A2.data[i];
    }
  };
  return id;
}

Tape::Var Tape::scale(Var a, float s) {
  Tensor C = val(a);
  for (float& v : C.data) v *= s;
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, s]() {
    kernels::axpy(s, nodes_[id].grad.data.data(), grad(a).data.data(),
                  static_cast<int>(nodes_[id].grad.size()));
  };
  return id;
}

Tape::Var Tape::tanh(Var a) {
  const Tensor& A = val(a);
  Tensor C(A.rows, A.cols);
  kernels::vec_tanh(A.data.data(), C.data.data(), static_cast<int>(A.size()));
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a]() {
    const Tensor& y = val(id);
    const Tensor& dC = nodes_[id].grad;
    Tensor& dA = grad(a);
    for (size_t i = 0; i < dC.size(); ++i) {
      dA.data[i] += dC.data[i] * (1.0f - y.data[i] * y.data[i]);
    }
  };
  return id;
}

Tape::Var Tape::sigmoid(Var a) {
  const Tensor& A = val(a);
  Tensor C(A.rows, A.cols);
  kernels::vec_sigmoid(A.data.data(), C.data.data(),
                       static_cast<int>(A.size()));
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a]() {
    const Tensor& y = val(id);
    const Tensor& dC = nodes_[id].grad;
    Tensor& dA = grad(a);
    for (size_t i = 0; i < dC.size(); ++i) {
      dA.data[i] += dC.data[i] * y.data[i] * (1.0f - y.data[i]);
    }
  };
  return id;
}

Tape::Var Tape::gelu(Var a) {
  const Tensor& A = val(a);
  Tensor C(A.rows, A.cols);
  constexpr float kInvSqrt2 = 0.7071067811865475f;
  for (size_t i = 0; i < A.size(); ++i) {
    const float x = A.data[i];
    C.data[i] = 0.5f * x * (1.0f + std::erf(x * kInvSqrt2));
  }
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a]() {
    const Tensor& A2 = val(a);
    const Tensor& dC = nodes_[id].grad;
    Tensor& dA = grad(a);
    constexpr float kInvSqrt2Pi = 0.3989422804014327f;
    for (size_t i = 0; i < dC.size(); ++i) {
      const float x = A2.data[i];
      const float cdf = 0.5f * (1.0f + std::erf(x * kInvSqrt2));
      const float pdf = kInvSqrt2Pi * std::exp(-0.5f * x * x);
      dA.data[i] += dC.data[i] * (cdf + x * pdf);
    }
  };
  return id;
}

Tape::Var Tape::layer_norm(Var x, Param& gain, Param& bias, float eps) {
  const Tensor& X = val(x);
  const int n = X.cols;
  if (gain.value.cols != n || bias.value.cols != n) {
    throw ShapeError("layer_norm: gain/bias dim mismatch");
  }
  auto xhat = std::make_shared<Tensor>(X.rows, n);
  auto inv_std = std::make_shared<std::vector<float>>(X.rows);
  Tensor Y(X.rows, n);
  for (int i = 0; i < X.rows; ++i) {
    const float* src = X.row(i);
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += src[j];
    mean /= n;
    double var = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = src[j] - mean;
      var += d * d;
    }
    var /= n;
    const float istd = 1.0f / std::sqrt(static_cast<float>(var) + eps);
    (*inv_std)[i] = istd;
    float* xh = xhat->row(i);
    float* y = Y.row(i);
    for (int j = 0; j < n; ++j) {
      xh[j] = (src[j] - static_cast<float>(mean)) * istd;
      y[j] = xh[j] * gain.value.at(0, j) + bias.value.at(0, j);
    }
  }
  const Var id = push(std::move(Y));
  Param* g = &gain;
  Param* b = &bias;
  nodes_[id].back = [this, id, x, g, b, xhat, inv_std]() {
    const Tensor& dY = nodes_[id].grad;
    const int cols = dY.cols;
    Tensor& dX = grad(x);
    for (int i = 0; i < dY.rows; ++i) {
      const float* dy = dY.row(i);
      const float* xh = xhat->row(i);
      double m1 = 0.0, m2 = 0.0;
      for (int j = 0; j < cols; ++j) {
        const float dxh = dy[j] * g->value.at(0, j);
        m1 += dxh;
        m2 += static_cast<double>(dxh) * xh[j];
      }
      m1 /= cols;
      m2 /= cols;
      float* dx = dX.row(i);
      const float istd = (*inv_std)[i];
      for (int j = 0; j < cols; ++j) {
        const float dxh = dy[j] * g->value.at(0, j);
        dx[j] += istd * (dxh - static_cast<float>(m1) -
                         xh[j] * static_cast<float>(m2));
        g->grad.at(0, j) += dy[j] * xh[j];
        b->grad.at(0, j) += dy[j];
      }
    }
  };
  return id;
}

Tape::Var Tape::softmax_rows(Var scores) {
  const Tensor& S = val(scores);
  Tensor P(S.rows, S.cols);
  for (int i = 0; i < S.rows; ++i) {
    const float* src = S.row(i);
    float mx = src[0];
    for (int j = 1; j < S.cols; ++j) mx = std::max(mx, src[j]);
    double sum = 0.0;
    float* dst = P.row(i);
    for (int j = 0; j < S.cols; ++j) {
      dst[j] = std::exp(src[j] - mx);
      sum += dst[j];
    }
    const float inv = 1.0f / static_cast<float>(sum);
    for (int j = 0; j < S.cols; ++j) dst[j] *= inv;
  }
  const Var id = push(std::move(P));
  nodes_[id].back = [this, id, scores]() {
    const Tensor& P2 = val(id);
    const Tensor& dP = nodes_[id].grad;
    Tensor& dS = grad(scores);
    for (int i = 0; i < P2.rows; ++i) {
      const float* p = P2.row(i);
      const float* dp = dP.row(i);
      double dot = 0.0;
      for (int j = 0; j < P2.cols; ++j) dot += static_cast<double>(dp[j]) * p[j];
      float* ds = dS.row(i);
      for (int j = 0; j < P2.cols; ++j) {
        ds[j] += p[j] * (dp[j] - static_cast<float>(dot));
      }
    }
  };
  return id;
}

Tape::Var Tape::log_softmax_rows(Var logits) {
  Tensor Y = val(logits);
  for (int i = 0; i < Y.rows; ++i) {
    kernels::log_softmax(Y.row(i), Y.cols);
  }
  const Var id = push(std::move(Y));
  nodes_[id].back = [this, id, logits]() {
    const Tensor& lp = val(id);
    const Tensor& dY = nodes_[id].grad;
    Tensor& dX = grad(logits);
    for (int i = 0; i < lp.rows; ++i) {
      const float* dy = dY.row(i);
      const float* l = lp.row(i);
      double s = 0.0;
      for (int j = 0; j < lp.cols; ++j) s += dy[j];
      float* dx = dX.row(i);
      for (int j = 0; j < lp.cols; ++j) {
        dx[j] += dy[j] - std::exp(l[j]) * static_cast<float>(s);
      }
    }
  };
  return id;
}

Tape::Var Tape::slice_cols(Var a, int c0, int c1) {
  const Tensor& A = val(a);
  if (c0 < 0 || c1 > A.cols || c0 >= c1) throw ShapeError("slice_cols: range");
  Tensor C(A.rows, c1 - c0);
  for (int i = 0; i < A.rows; ++i) {
    std::copy(A.row(i) + c0, A.row(i) + c1, C.row(i));
  }
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, c0]() {
    const Tensor& dC = nodes_[id].grad;
    Tensor& dA = grad(a);
    for (int i = 0; i < dC.rows; ++i) {
      kernels::axpy(1.0f, dC.row(i), dA.row(i) + c0, dC.cols);
    }
  };
  return id;
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const int rows = val(parts[0]).rows;
  int cols = 0;
  for (Var v : parts) {
    if (val(v).rows != rows) throw ShapeError("concat_cols: row mismatch");
    cols += val(v).cols;
  }
  Tensor C(rows, cols);
  int off = 0;
  for (Var v : parts) {
    const Tensor& P = val(v);
    for (int i = 0; i < rows; ++i) {
      std::copy(P.row(i), P.row(i) + P.cols, C.row(i) + off);
    }
    off += P.cols;
  }
  const Var id = push(std::move(C));
  std::vector<Var> saved = parts;
  nodes_[id].back = [this, id, saved]() {
    const Tensor& dC = nodes_[id].grad;
    int off2 = 0;
    for (Var v : saved) {
      Tensor& dP = grad(v);
      for (int i = 0; i < dC.rows; ++i) {
        kernels::axpy(1.0f, dC.row(i) + off2, dP.row(i), dP.cols);
      }
      off2 += dP.cols;
    }
  };
  return id;
}

Tape::Var Tape::pick_row(Var a, int row) {
  const Tensor& A = val(a);
  if (row < 0 || row >= A.rows) throw IndexError("pick_row: out of range");
  Tensor C(1, A.cols);
  std::copy(A.row(row), A.row(row) + A.cols, C.row(0));
  const Var id = push(std::move(C));
  nodes_[id].back = [this, id, a, row]() {
    kernels::axpy(1.0f, nodes_[id].grad.row(0), grad(a).row(row),
                  nodes_[id].grad.cols);
  };
  return id;
}

Tape::Var Tape::embedding(Param& table, const std::vector<int>& ids) {
  const int dim = table.value.cols;
  Tensor C(static_cast<int>(ids.size()), dim);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= table.value.rows) {
      throw IndexError("embedding: id out of range");
    }
    std::copy(table.value.row(ids[i]), table.value.row(ids[i]) + dim, C.row(i));
  }
  const Var id = push(std::move(C));
  Param* t = &table;
  std::vector<int> saved = ids;
  nodes_[id].back = [this, id, t, saved]() {
    const Tensor& dC = nodes_[id].grad;
    for (size_t i = 0; i < saved.size(); ++i) {
      kernels::axpy(1.0f, dC.row(static_cast<int>(i)), t->grad.row(saved[i]),
                    dC.cols);
    }
  };
  return id;
}

namespace {

struct LstmCache {
  Tensor gates;   // (T, 4H) activated [i f g o]
  Tensor cells;   // (T, H)
  Tensor tanh_c;  // (T, H)
  Tensor h_prev;  // (T, H) hidden state fed into step t
};

}  // namespace

Tape::Var Tape::lstm(Var x, Param& wx, Param& wh, Param& b, bool reverse) {
  const Tensor& X = val(x);
  const int T = X.rows;
  const int in_dim = X.cols;
  const int H = wh.value.cols;
  if (wx.value.rows != 4 * H || wx.value.cols != in_dim ||
      wh.value.rows != 4 * H || b.value.cols != 4 * H) {
    throw ShapeError("lstm: parameter shapes inconsistent");
  }

  auto cache = std::make_shared<LstmCache>();
  cache->gates = Tensor(T, 4 * H);
  cache->cells = Tensor(T, H);
  cache->tanh_c = Tensor(T, H);
  cache->h_prev = Tensor(T, H);

  // Input contribution for all steps at once.
  const Tensor wxT = transposed(wx.value);
  Tensor xw(T, 4 * H);
  kernels::gemm(T, 4 * H, in_dim, X.data.data(), in_dim, wxT.data.data(),
                4 * H, xw.data.data(), 4 * H, false);

  Tensor value(T, H);
  std::vector<float> h(H, 0.0f), c(H, 0.0f), a(4 * H);
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    std::copy(h.begin(), h.end(), cache->h_prev.row(t));
    kernels::gemv(4 * H, H, wh.value.data.data(), H, h.data(), a.data(),
                  false);
    kernels::axpy(1.0f, xw.row(t), a.data(), 4 * H);
    kernels::axpy(1.0f, b.value.row(0), a.data(), 4 * H);

    float* g = cache->gates.row(t);
    kernels::vec_sigmoid(a.data(), g, H);                    // i
    kernels::vec_sigmoid(a.data() + H, g + H, H);            // f
    kernels::vec_tanh(a.data() + 2 * H, g + 2 * H, H);       // g
    kernels::vec_sigmoid(a.data() + 3 * H, g + 3 * H, H);    // o

    float* cc = cache->cells.row(t);
    float* tc = cache->tanh_c.row(t);
    float* hv = value.row(t);
    for (int j = 0; j < H; ++j) {
      cc[j] = g[H + j] * c[j] + g[j] * g[2 * H + j];
      c[j] = cc[j];
    }
    kernels::vec_tanh(cc, tc, H);
    for (int j = 0; j < H; ++j) {
      hv[j] = g[3 * H + j] * tc[j];
      h[j] = hv[j];
    }
  }

  const Var id = push(std::move(value));
  Param* pwx = &wx;
  Param* pwh = &wh;
  Param* pb = &b;
  nodes_[id].back = [this, id, x, pwx, pwh, pb, reverse, cache, T, in_dim,
                     H]() {
    const Tensor& dY = nodes_[id].grad;
    const Tensor& X2 = val(x);
    Tensor da_all(T, 4 * H);
    std::vector<float> dh(H, 0.0f), dc_next(H, 0.0f);
    std::vector<float> dh_rec(H, 0.0f);
    for (int s = T - 1; s >= 0; --s) {
      const int t = reverse ? T - 1 - s : s;
      const float* g = cache->gates.row(t);
      const float* tc = cache->tanh_c.row(t);
      const float* cprev =
          s > 0 ? cache->cells.row(reverse ? t + 1 : t - 1) : nullptr;
      float* da = da_all.row(t);
      for (int j = 0; j < H; ++j) {
        const float dht = dY.at(t, j) + dh_rec[j];
        const float i = g[j], f = g[H + j], gg = g[2 * H + j],
                    o = g[3 * H + j];
        const float do_ = dht * tc[j];
        const float dct = dht * o * (1.0f - tc[j] * tc[j]) + dc_next[j];
        const float di = dct * gg;
        const float df = dct * (cprev != nullptr ? cprev[j] : 0.0f);
        const float dg = dct * i;
        dc_next[j] = dct * f;
        da[j] = di * i * (1.0f - i);
        da[H + j] = df * f * (1.0f - f);
        da[2 * H + j] = dg * (1.0f - gg * gg);
        da[3 * H + j] = do_ * o * (1.0f - o);
      }
      // dh through the recurrent weights.
      kernels::gemm(1, H, 4 * H, da, 4 * H, pwh->value.data.data(), H,
                    dh_rec.data(), H, false);
    }
    const Tensor daT = transposed(da_all);
    kernels::gemm(4 * H, in_dim, T, daT.data.data(), T, X2.data.data(), in_dim,
                  pwx->grad.data.data(), in_dim, true);
    kernels::gemm(4 * H, H, T, daT.data.data(), T, cache->h_prev.data.data(),
                  H, pwh->grad.data.data(), H, true);
    const Tensor bsum = colsum(da_all);
    add_into(pb->grad, bsum);
    kernels::gemm(T, in_dim, 4 * H, da_all.data.data(), 4 * H,
                  pwx->value.data.data(), in_dim, grad(x).data.data(), in_dim,
                  true);
  };
  return id;
}

Tape::Var Tape::joint_lattice(Var henc, Var hpred, Param& w_out,
                              Param& b_out) {
  const Tensor& E = val(henc);
  const Tensor& P = val(hpred);
  if (E.cols != P.cols) throw ShapeError("joint: width mismatch");
  const int T = E.rows;
  const int U1 = P.rows;
  const int J = E.cols;
  const int V = w_out.value.rows;
  if (w_out.value.cols != J || b_out.value.cols != V) {
    throw ShapeError("joint: output projection shape");
  }
  const int N = T * U1;

  auto z = std::make_shared<Tensor>(N, J);
  for (int t = 0; t < T; ++t) {
    const float* e = E.row(t);
    for (int u = 0; u < U1; ++u) {
      const float* p = P.row(u);
      float* zr = z->row(t * U1 + u);
      for (int j = 0; j < J; ++j) zr[j] = e[j] * p[j];
    }
  }
  kernels::vec_tanh(z->data.data(), z->data.data(), N * J);

  Tensor logits(N, V);
  const Tensor wT = transposed(w_out.value);
  kernels::gemm(N, V, J, z->data.data(), J, wT.data.data(), V,
                logits.data.data(), V, false);
  auto probs = std::make_shared<Tensor>(N, V);
  for (int r = 0; r < N; ++r) {
    float* row = logits.row(r);
    kernels::axpy(1.0f, b_out.value.row(0), row, V);
    kernels::log_softmax(row, V);
    float* pr = probs->row(r);
    for (int vv = 0; vv < V; ++vv) pr[vv] = std::exp(row[vv]);
  }

  const Var id = push(std::move(logits));
  Param* pw = &w_out;
  Param* pb = &b_out;
  nodes_[id].back = [this, id, henc, hpred, pw, pb, z, probs, T, U1, J, V]() {
    const Tensor& dLogp = nodes_[id].grad;
    const int N2 = T * U1;
    Tensor dlogits(N2, V);
    for (int r = 0; r < N2; ++r) {
      const float* dlp = dLogp.row(r);
      const float* pr = probs->row(r);
      double s = 0.0;
      for (int vv = 0; vv < V; ++vv) s += dlp[vv];
      float* dl = dlogits.row(r);
      for (int vv = 0; vv < V; ++vv) {
        dl[vv] = dlp[vv] - pr[vv] * static_cast<float>(s);
      }
    }
    const Tensor dlT = transposed(dlogits);
    kernels::gemm(V, J, N2, dlT.data.data(), N2, z->data.data(), J,
                  pw->grad.data.data(), J, true);
    const Tensor bsum = colsum(dlogits);
    add_into(pb->grad, bsum);

    Tensor dz(N2, J);
    kernels::gemm(N2, J, V, dlogits.data.data(), V, pw->value.data.data(), J,
                  dz.data.data(), J, false);
    // through tanh(e (*) p)
    const Tensor& E2 = val(henc);
    const Tensor& P2 = val(hpred);
    Tensor& dE = grad(henc);
    Tensor& dP = grad(hpred);
    for (int t = 0; t < T; ++t) {
      const float* e = E2.row(t);
      float* de = dE.row(t);
      for (int u = 0; u < U1; ++u) {
        const int r = t * U1 + u;
        const float* zr = z->row(r);
        const float* dzr = dz.row(r);
        const float* p = P2.row(u);
        float* dp = dP.row(u);
        for (int j = 0; j < J; ++j) {
          const float dpre = dzr[j] * (1.0f - zr[j] * zr[j]);
          de[j] += dpre * p[j];
          dp[j] += dpre * e[j];
        }
      }
    }
  };
  return id;
}

Tape::Var Tape::softmax_cross_entropy(Var logits, int label) {
  const Tensor& L = val(logits);
  if (L.rows != 1) throw ShapeError("softmax_ce: logits must be (1, C)");
  if (label < 0 || label >= L.cols) throw IndexError("softmax_ce: label");
  Tensor lp = L;
  kernels::log_softmax(lp.row(0), L.cols);
  Tensor loss(1, 1);
  loss.at(0, 0) = -lp.at(0, label);
  auto probs = std::make_shared<std::vector<float>>(L.cols);
  for (int j = 0; j < L.cols; ++j) (*probs)[j] = std::exp(lp.at(0, j));
  const Var id = push(std::move(loss));
  nodes_[id].back = [this, id, logits, label, probs]() {
    const float d = nodes_[id].grad.at(0, 0);
    Tensor& dL = grad(logits);
    for (int j = 0; j < dL.cols; ++j) {
      dL.at(0, j) += d * ((*probs)[j] - (j == label ? 1.0f : 0.0f));
    }
  };
  return id;
}

Tape::Var Tape::sigmoid_cross_entropy(Var logits,
                                      const std::vector<float>& targets) {
  const Tensor& L = val(logits);
  if (L.rows != 1 || L.cols != static_cast<int>(targets.size())) {
    throw ShapeError("sigmoid_ce: logits/target shapes differ");
  }
  double total = 0.0;
  for (int j = 0; j < L.cols; ++j) {
    const double zl = L.at(0, j);
    // max(z,0) - z*t + log(1 + exp(-|z|))
    total += std::max(zl, 0.0) - zl * targets[j] +
             std::log1p(std::exp(-std::abs(zl)));
  }
  Tensor loss(1, 1);
  loss.at(0, 0) = static_cast<float>(total);
  std::vector<float> saved = targets;
  const Var id = push(std::move(loss));
  nodes_[id].back = [this, id, logits, saved]() {
    const float d = nodes_[id].grad.at(0, 0);
    const Tensor& L2 = val(logits);
    Tensor& dL = grad(logits);
    for (int j = 0; j < dL.cols; ++j) {
      const float s = 1.0f / (1.0f + std::exp(-L2.at(0, j)));
      dL.at(0, j) += d * (s - saved[j]);
    }
  };
  return id;
}

Tape::Var Tape::custom(Tensor value,
                       std::function<void(Tape&, Var)> backward_fn) {
  const Var id = push(std::move(value));
  if (backward_fn) {
    nodes_[id].back = [this, id, fn = std::move(backward_fn)]() {
      fn(*this, id);
    };
  }
  return id;
}

void Tape::backward(Var loss) {
  if (loss < 0 || loss >= static_cast<Var>(nodes_.size())) {
    throw IndexError("backward: bad loss var");
  }
  const Tensor& lv = val(loss);
  if (lv.rows != 1 || lv.cols != 1) {
    throw ShapeError("backward: loss must be scalar");
  }
  nodes_[loss].grad.at(0, 0) = 1.0f;
  for (Var i = loss; i >= 0; --i) {
    if (nodes_[i].back) nodes_[i].back();
  }
}

}  // namespace nn
}  // namespace dialslu
