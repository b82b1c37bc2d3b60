// dialslu/transducer/model.cc

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

#include "dialslu/transducer/model.h"

#include <cmath>

#include "dialslu/kernels/kernels.h"
#include "dialslu/transducer/loss.h"
#include "dialslu/util/errors.h"

namespace dialslu {

using nn::Tape;

nlohmann::ordered_json TransducerConfig::to_json() const {
  nlohmann::ordered_json j;
  j["input_dim"] = input_dim;
  j["history_dim"] = history_dim;
  j["encoder_layers"] = encoder_layers;
  j["encoder_hidden"] = encoder_hidden;
  j["predictor_hidden"] = predictor_hidden;
  j["predictor_embed"] = predictor_embed;
  j["joint_dim"] = joint_dim;
  j["num_outputs"] = num_outputs;
  return j;
}

TransducerConfig TransducerConfig::from_json(const nlohmann::ordered_json& j) {
  TransducerConfig cfg;
  cfg.input_dim = j.at("input_dim").get<int>();
  cfg.history_dim = j.at("history_dim").get<int>();
  cfg.encoder_layers = j.at("encoder_layers").get<int>();
  cfg.encoder_hidden = j.at("encoder_hidden").get<int>();
  cfg.predictor_hidden = j.at("predictor_hidden").get<int>();
  cfg.predictor_embed = j.at("predictor_embed").get<int>();
  cfg.joint_dim = j.at("joint_dim").get<int>();
  cfg.num_outputs = j.at("num_outputs").get<int>();
  return cfg;
}

namespace {

std::string layer_prefix(int layer, bool reverse) {
  return "enc.l" + std::to_string(layer) + (reverse ? ".rev." : ".fwd.");
}

// Forget-gate bias starts at 1 so early training does not wash out state.
void init_lstm_bias(nn::Param* b, int hidden) {
  for (int j = 0; j < hidden; ++j) b->value.at(0, hidden + j) = 1.0f;
}

// Standalone LSTM forward for inference.
Tensor lstm_run(const Tensor& x, const nn::Param& wx, const nn::Param& wh,
                const nn::Param& b, bool reverse) {
  const int T = x.rows;
  const int H = wh.value.cols;
  Tensor out(T, H);
  const Tensor wxT = nn::transposed(wx.value);
  Tensor xw(T, 4 * H);
  kernels::gemm(T, 4 * H, x.cols, x.data.data(), x.cols, wxT.data.data(),
                4 * H, xw.data.data(), 4 * H, false);
  std::vector<float> h(H, 0.0f), c(H, 0.0f), a(4 * H), gi(H), gf(H), gg(H),
      go(H);
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    kernels::gemv(4 * H, H, wh.value.data.data(), H, h.data(), a.data(),
                  false);
    kernels::axpy(1.0f, xw.row(t), a.data(), 4 * H);
    kernels::axpy(1.0f, b.value.row(0), a.data(), 4 * H);
    kernels::vec_sigmoid(a.data(), gi.data(), H);
    kernels::vec_sigmoid(a.data() + H, gf.data(), H);
    kernels::vec_tanh(a.data() + 2 * H, gg.data(), H);
    kernels::vec_sigmoid(a.data() + 3 * H, go.data(), H);
    float* dst = out.row(t);
    for (int j = 0; j < H; ++j) {
      c[j] = gf[j] * c[j] + gi[j] * gg[j];
      dst[j] = go[j] * std::tanh(c[j]);
      h[j] = dst[j];
    }
  }
  return out;
}

}  // namespace

EncoderStack::EncoderStack(nn::ParamSet& params, int input_dim, int layers,
                           int hidden, Rng& rng)
    : input_dim_(input_dim), hidden_(hidden) {
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? input_dim : 2 * hidden;
    Layer layer;
    for (bool reverse : {false, true}) {
      Dir& d = reverse ? layer.rev : layer.fwd;
      const std::string p = layer_prefix(l, reverse);
      d.wx = params.create_uniform(p + "wx", 4 * hidden, in, in, rng);
      d.wh = params.create_uniform(p + "wh", 4 * hidden, hidden, hidden, rng);
      d.b = params.create(p + "b", 1, 4 * hidden);
      init_lstm_bias(d.b, hidden);
    }
    layers_.push_back(layer);
  }
}

EncoderStack::EncoderStack(nn::ParamSet& params, int input_dim, int layers,
                           int hidden)
    : input_dim_(input_dim), hidden_(hidden) {
  for (int l = 0; l < layers; ++l) {
    Layer layer;
    for (bool reverse : {false, true}) {
      Dir& d = reverse ? layer.rev : layer.fwd;
      const std::string p = layer_prefix(l, reverse);
      d.wx = params.at(p + "wx");
      d.wh = params.at(p + "wh");
      d.b = params.at(p + "b");
    }
    layers_.push_back(layer);
  }
}

Tape::Var EncoderStack::forward(Tape& tape, Tape::Var x) const {
  Tape::Var cur = x;
  for (const Layer& layer : layers_) {
    const auto f =
        tape.lstm(cur, *layer.fwd.wx, *layer.fwd.wh, *layer.fwd.b, false);
    const auto r =
        tape.lstm(cur, *layer.rev.wx, *layer.rev.wh, *layer.rev.b, true);
    cur = tape.concat_cols({f, r});
  }
  return cur;
}

Tensor EncoderStack::run(const Tensor& x) const {
  Tensor cur = x;
  for (const Layer& layer : layers_) {
    const Tensor f = lstm_run(cur, *layer.fwd.wx, *layer.fwd.wh, *layer.fwd.b,
                              false);
    const Tensor r =
        lstm_run(cur, *layer.rev.wx, *layer.rev.wh, *layer.rev.b, true);
    Tensor next(cur.rows, 2 * hidden_);
    for (int t = 0; t < cur.rows; ++t) {
      std::copy(f.row(t), f.row(t) + hidden_, next.row(t));
      std::copy(r.row(t), r.row(t) + hidden_, next.row(t) + hidden_);
    }
    cur = std::move(next);
  }
  return cur;
}

TransducerModel::TransducerModel(const TransducerConfig& cfg, uint64_t seed)
    : cfg_(cfg) {
  Rng rng = Rng::derive(seed, "transducer-init");
  encoder_ = std::make_unique<EncoderStack>(params_, cfg.total_input_dim(),
                                            cfg.encoder_layers,
                                            cfg.encoder_hidden, rng);
  const int enc_out = encoder_->output_dim();
  pred_embed_ = params_.create_uniform("pred.embed", cfg.num_outputs,
                                       cfg.predictor_embed,
                                       cfg.predictor_embed, rng);
  pred_wx_ = params_.create_uniform("pred.wx", 4 * cfg.predictor_hidden,
                                    cfg.predictor_embed, cfg.predictor_embed,
                                    rng);
  pred_wh_ = params_.create_uniform("pred.wh", 4 * cfg.predictor_hidden,
                                    cfg.predictor_hidden, cfg.predictor_hidden,
                                    rng);
  pred_b_ = params_.create("pred.b", 1, 4 * cfg.predictor_hidden);
  init_lstm_bias(pred_b_, cfg.predictor_hidden);

  joint_enc_w_ =
      params_.create_uniform("joint.enc_w", cfg.joint_dim, enc_out, enc_out,
                             rng);
  joint_enc_b_ = params_.create("joint.enc_b", 1, cfg.joint_dim);
  joint_pred_w_ = params_.create_uniform("joint.pred_w", cfg.joint_dim,
                                         cfg.predictor_hidden,
                                         cfg.predictor_hidden, rng);
  joint_pred_b_ = params_.create("joint.pred_b", 1, cfg.joint_dim);
  joint_out_w_ = params_.create_uniform("joint.out_w", cfg.num_outputs,
                                        cfg.joint_dim, cfg.joint_dim, rng);
  joint_out_b_ = params_.create("joint.out_b", 1, cfg.num_outputs);
  provenance_ = nlohmann::ordered_json::object();
}

void TransducerModel::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["kind"] = "transducer";
  j["config"] = cfg_.to_json();
  j["provenance"] = provenance_;
  nn::save_checkpoint(path, j, params_);
}

TransducerModel TransducerModel::load(const std::string& path) {
  const auto ckpt = nn::load_checkpoint(path);
  if (ckpt.config.at("kind") != "transducer") {
    throw IoError("checkpoint is not a transducer model: " + path);
  }
  TransducerModel model(TransducerConfig::from_json(ckpt.config.at("config")),
                        0);
  nn::restore_params(ckpt, model.params_);
  model.provenance_ = ckpt.config.value("provenance",
                                        nlohmann::ordered_json::object());
  return model;
}

Tensor TransducerModel::make_input(const FeatureSequence& feats,
                                   std::span<const float> history) const {
  if (feats.dim() != cfg_.input_dim) {
    throw ShapeError("transducer: feature dim " + std::to_string(feats.dim()) +
                     " != configured " + std::to_string(cfg_.input_dim));
  }
  if (cfg_.history_dim == 0) {
    if (!history.empty()) {
      throw ContractError("transducer: history given to a non-history model");
    }
    return feats.frames;
  }
  if (history.empty()) {
    throw ContractError("transducer: model requires a history embedding");
  }
  if (static_cast<int>(history.size()) != cfg_.history_dim) {
    throw ShapeError("transducer: history dim mismatch");
  }
  Tensor input(feats.num_frames(), cfg_.total_input_dim());
  for (int t = 0; t < feats.num_frames(); ++t) {
    float* dst = input.row(t);
    std::copy(feats.frames.row(t), feats.frames.row(t) + cfg_.input_dim, dst);
    std::copy(history.begin(), history.end(), dst + cfg_.input_dim);
  }
  return input;
}

Tape::Var TransducerModel::encode(Tape& tape, Tape::Var input) const {
  return encoder_->forward(tape, input);
}

Tensor TransducerModel::encode(const Tensor& input) const {
  return encoder_->run(input);
}

Tape::Var TransducerModel::rnnt_nll(Tape& tape, const Tensor& input,
                                    const std::vector<int>& target) const {
  const int T = input.rows;
  const auto enc = encoder_->forward(tape, tape.leaf(input));
  const auto enc_p = tape.add_row(tape.matmul_nt(enc, tape.param(*joint_enc_w_)),
                                  tape.param(*joint_enc_b_));

  std::vector<int> pred_in;
  pred_in.reserve(target.size() + 1);
  pred_in.push_back(kBlankIndex);  // start symbol
  pred_in.insert(pred_in.end(), target.begin(), target.end());
  const auto pemb = tape.embedding(*pred_embed_, pred_in);
  const auto pstates = tape.lstm(pemb, *pred_wx_, *pred_wh_, *pred_b_, false);
  const auto pred_p = tape.add_row(
      tape.matmul_nt(pstates, tape.param(*joint_pred_w_)),
      tape.param(*joint_pred_b_));

  const auto logp = tape.joint_lattice(enc_p, pred_p, *joint_out_w_,
                                       *joint_out_b_);

  const auto res = std::make_shared<LossResult>(
      dialslu::rnnt_loss(tape.val(logp), T, target, kBlankIndex));
  Tensor value(1, 1);
  value.at(0, 0) = static_cast<float>(res->loss);
  return tape.custom(std::move(value), [logp, res](Tape& t, Tape::Var self) {
    const float d = t.grad(self).at(0, 0);
    kernels::axpy(d, res->grad.data.data(), t.grad(logp).data.data(),
                  static_cast<int>(res->grad.size()));
  });
}

Tensor TransducerModel::encode_projected(const Tensor& input) const {
  const Tensor enc = encoder_->run(input);
  Tensor out(enc.rows, cfg_.joint_dim);
  for (int t = 0; t < enc.rows; ++t) {
    kernels::gemv(cfg_.joint_dim, enc.cols, joint_enc_w_->value.data.data(),
                  enc.cols, enc.row(t), out.row(t), false);
    kernels::axpy(1.0f, joint_enc_b_->value.row(0), out.row(t),
                  cfg_.joint_dim);
  }
  return out;
}

TransducerModel::PredictorState TransducerModel::predictor_start() const {
  PredictorState state;
  state.h.assign(cfg_.predictor_hidden, 0.0f);
  state.c.assign(cfg_.predictor_hidden, 0.0f);
  predictor_step(kBlankIndex, state);
  return state;
}

void TransducerModel::predictor_step(int token,
                                     PredictorState& state) const {
  const int H = cfg_.predictor_hidden;
  if (token < 0 || token >= cfg_.num_outputs) {
    throw IndexError("predictor_step: token out of range");
  }
  std::vector<float> a(4 * H);
  kernels::gemv(4 * H, cfg_.predictor_embed, pred_wx_->value.data.data(),
                cfg_.predictor_embed, pred_embed_->value.row(token), a.data(),
                false);
  kernels::gemv(4 * H, H, pred_wh_->value.data.data(), H, state.h.data(),
                a.data(), true);
  kernels::axpy(1.0f, pred_b_->value.row(0), a.data(), 4 * H);
  std::vector<float> gi(H), gf(H), gg(H), go(H);
  kernels::vec_sigmoid(a.data(), gi.data(), H);
  kernels::vec_sigmoid(a.data() + H, gf.data(), H);
  kernels::vec_tanh(a.data() + 2 * H, gg.data(), H);
  kernels::vec_sigmoid(a.data() + 3 * H, go.data(), H);
  for (int j = 0; j < H; ++j) {
    state.c[j] = gf[j] * state.c[j] + gi[j] * gg[j];
    state.h[j] = go[j] * std::tanh(state.c[j]);
  }
}

std::vector<float> TransducerModel::joint_logits(
    const float* enc_proj_row, const PredictorState& state) const {
  const int J = cfg_.joint_dim;
  const int V = cfg_.num_outputs;
  std::vector<float> pred_p(J);
  kernels::gemv(J, cfg_.predictor_hidden, joint_pred_w_->value.data.data(),
                cfg_.predictor_hidden, state.h.data(), pred_p.data(), false);
  kernels::axpy(1.0f, joint_pred_b_->value.row(0), pred_p.data(), J);
  std::vector<float> z(J);
  for (int j = 0; j < J; ++j) z[j] = enc_proj_row[j] * pred_p[j];
  kernels::vec_tanh(z.data(), z.data(), J);
  std::vector<float> logits(V);
  kernels::gemv(V, J, joint_out_w_->value.data.data(), J, z.data(),
                logits.data(), false);
  kernels::axpy(1.0f, joint_out_b_->value.row(0), logits.data(), V);
  return logits;
}

std::vector<float> TransducerModel::joint_log_probs(
    const float* enc_proj_row, const PredictorState& state) const {
  std::vector<float> logits = joint_logits(enc_proj_row, state);
  kernels::log_softmax(logits.data(), static_cast<int>(logits.size()));
  return logits;
}

Hypothesis greedy_decode(const TransducerModel& model,
                         const FeatureSequence& feats,
                         std::span<const float> history,
                         int max_symbols_per_frame) {
  const Tensor input = model.make_input(feats, history);
  const Tensor enc_p = model.encode_projected(input);
  auto state = model.predictor_start();

  Hypothesis hyp;
  for (int t = 0; t < enc_p.rows; ++t) {
    for (int k = 0; k < max_symbols_per_frame; ++k) {
      const auto lp = model.joint_log_probs(enc_p.row(t), state);
      int best = 0;
      for (int v = 1; v < static_cast<int>(lp.size()); ++v) {
        if (lp[v] > lp[best]) best = v;
      }
      hyp.log_score += lp[best];
      if (best == kBlankIndex) break;
      hyp.tokens.push_back(best);
      hyp.frames.push_back(t);
      model.predictor_step(best, state);
    }
  }
  return hyp;
}

CtcModel::CtcModel(const TransducerConfig& cfg, uint64_t seed) : cfg_(cfg) {
  Rng rng = Rng::derive(seed, "ctc-init");
  encoder_ = std::make_unique<EncoderStack>(params_, cfg.total_input_dim(),
                                            cfg.encoder_layers,
                                            cfg.encoder_hidden, rng);
  const int enc_out = encoder_->output_dim();
  out_w_ = params_.create_uniform("ctc.w", cfg.num_outputs, enc_out, enc_out,
                                  rng);
  out_b_ = params_.create("ctc.b", 1, cfg.num_outputs);
}

void CtcModel::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["kind"] = "ctc_encoder";
  j["config"] = cfg_.to_json();
  nn::save_checkpoint(path, j, params_);
}

CtcModel CtcModel::load(const std::string& path) {
  const auto ckpt = nn::load_checkpoint(path);
  if (ckpt.config.at("kind") != "ctc_encoder") {
    throw IoError("checkpoint is not a ctc encoder: " + path);
  }
  CtcModel model(TransducerConfig::from_json(ckpt.config.at("config")), 0);
  nn::restore_params(ckpt, model.params_);
  return model;
}

Tape::Var CtcModel::ctc_nll(Tape& tape, const Tensor& input,
                            const std::vector<int>& target) const {
  const auto enc = encoder_->forward(tape, tape.leaf(input));
  const auto logits = tape.add_row(tape.matmul_nt(enc, tape.param(*out_w_)),
                                   tape.param(*out_b_));
  const auto logp = tape.log_softmax_rows(logits);
  const auto res = std::make_shared<LossResult>(
      dialslu::ctc_loss(tape.val(logp), target, kBlankIndex));
  Tensor value(1, 1);
  value.at(0, 0) = static_cast<float>(res->loss);
  return tape.custom(std::move(value), [logp, res](Tape& t, Tape::Var self) {
    const float d = t.grad(self).at(0, 0);
    kernels::axpy(d, res->grad.data.data(), t.grad(logp).data.data(),
                  static_cast<int>(res->grad.size()));
  });
}

Tensor CtcModel::frame_log_probs(const Tensor& input) const {
  const Tensor enc = encoder_->run(input);
  Tensor logits(enc.rows, cfg_.num_outputs);
  for (int t = 0; t < enc.rows; ++t) {
    kernels::gemv(cfg_.num_outputs, enc.cols, out_w_->value.data.data(),
                  enc.cols, enc.row(t), logits.row(t), false);
    kernels::axpy(1.0f, out_b_->value.row(0), logits.row(t),
                  cfg_.num_outputs);
    kernels::log_softmax(logits.row(t), cfg_.num_outputs);
  }
  return logits;
}

}  // namespace dialslu
