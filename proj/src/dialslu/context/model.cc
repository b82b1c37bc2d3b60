// dialslu/context/model.cc

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

#include "dialslu/context/model.h"

#include <cmath>

#include "dialslu/util/errors.h"

namespace dialslu {

using nn::Tape;

nlohmann::ordered_json ContextModelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["layers"] = layers;
  j["heads"] = heads;
  j["d_model"] = d_model;
  j["d_ff"] = d_ff;
  j["max_len"] = max_len;
  j["proj_dim"] = proj_dim;
  j["task"] = task;
  return j;
}

ContextModelConfig ContextModelConfig::from_json(
    const nlohmann::ordered_json& j) {
  ContextModelConfig cfg;
  cfg.layers = j.at("layers").get<int>();
  cfg.heads = j.at("heads").get<int>();
  cfg.d_model = j.at("d_model").get<int>();
  cfg.d_ff = j.at("d_ff").get<int>();
  cfg.max_len = j.at("max_len").get<int>();
  cfg.proj_dim = j.at("proj_dim").get<int>();
  cfg.task = j.at("task").get<std::string>();
  return cfg;
}

ContextModel::ContextModel(const ContextModelConfig& cfg, Tokenizer tokenizer,
                           uint64_t seed)
    : cfg_(cfg), tokenizer_(std::move(tokenizer)) {
  if (cfg_.d_model % cfg_.heads != 0) {
    throw ConfigError("context model: d_model must divide into heads");
  }
  Rng rng = Rng::derive(seed, "context-init");
  wire_params(&rng);
}

void ContextModel::wire_params(Rng* rng) {
  const int d = cfg_.d_model;
  auto create = [&](const std::string& name, int r, int c, int fan_in) {
    if (rng != nullptr) return params_.create_uniform(name, r, c, fan_in, *rng);
    return params_.create(name, r, c);
  };
  auto ones = [&](const std::string& name, int c) {
    nn::Param* p = params_.create(name, 1, c);
    p->value.fill(1.0f);
    return p;
  };

  tok_emb_ = create("emb.tok", tokenizer_.vocab_size(), d, d);
  pos_emb_ = create("emb.pos", cfg_.max_len, d, d);
  for (int l = 0; l < cfg_.layers; ++l) {
    const std::string p = "l" + std::to_string(l) + ".";
    Layer layer;
    layer.ln1_g = ones(p + "ln1.g", d);
    layer.ln1_b = params_.create(p + "ln1.b", 1, d);
    layer.wq = create(p + "attn.wq", d, d, d);
    layer.bq = params_.create(p + "attn.bq", 1, d);
    layer.wk = create(p + "attn.wk", d, d, d);
    layer.bk = params_.create(p + "attn.bk", 1, d);
    layer.wv = create(p + "attn.wv", d, d, d);
    layer.bv = params_.create(p + "attn.bv", 1, d);
    layer.wo = create(p + "attn.wo", d, d, d);
    layer.bo = params_.create(p + "attn.bo", 1, d);
    layer.ln2_g = ones(p + "ln2.g", d);
    layer.ln2_b = params_.create(p + "ln2.b", 1, d);
    layer.ff_w1 = create(p + "ff.w1", cfg_.d_ff, d, d);
    layer.ff_b1 = params_.create(p + "ff.b1", 1, cfg_.d_ff);
    layer.ff_w2 = create(p + "ff.w2", d, cfg_.d_ff, cfg_.d_ff);
    layer.ff_b2 = params_.create(p + "ff.b2", 1, d);
    layers_.push_back(layer);
  }
  final_g_ = ones("final_ln.g", d);
  final_b_ = params_.create("final_ln.b", 1, d);
  proj_w_ = create("proj.w", cfg_.proj_dim, d, d);
  proj_b_ = params_.create("proj.b", 1, cfg_.proj_dim);
  head_w_ = create("head.w", cfg_.num_classes(), cfg_.proj_dim, cfg_.proj_dim);
  head_b_ = params_.create("head.b", 1, cfg_.num_classes());
}

ContextModel::Forward ContextModel::forward(Tape& tape,
                                            const std::vector<int>& ids) const {
  if (static_cast<int>(ids.size()) > cfg_.max_len) {
    throw LengthError("context model: sequence longer than max_len");
  }
  if (ids.empty()) throw EmptyInputError("context model: empty sequence");
  const int L = static_cast<int>(ids.size());
  const int d = cfg_.d_model;
  const int heads = cfg_.heads;
  const int dh = d / heads;
  const float inv_sqrt_dh = 1.0f / std::sqrt(static_cast<float>(dh));

  std::vector<int> positions(L);
  for (int i = 0; i < L; ++i) positions[i] = i;
  auto x = tape.add(tape.embedding(*tok_emb_, ids),
                    tape.embedding(*pos_emb_, positions));

  for (const Layer& layer : layers_) {
    auto h = tape.layer_norm(x, *layer.ln1_g, *layer.ln1_b);
    auto q = tape.add_row(tape.matmul_nt(h, tape.param(*layer.wq)),
                          tape.param(*layer.bq));
    auto k = tape.add_row(tape.matmul_nt(h, tape.param(*layer.wk)),
                          tape.param(*layer.bk));
    auto v = tape.add_row(tape.matmul_nt(h, tape.param(*layer.wv)),
                          tape.param(*layer.bv));
    std::vector<Tape::Var> head_outs;
    for (int hd = 0; hd < heads; ++hd) {
      const int c0 = hd * dh, c1 = (hd + 1) * dh;
      auto qh = tape.slice_cols(q, c0, c1);
      auto kh = tape.slice_cols(k, c0, c1);
      auto vh = tape.slice_cols(v, c0, c1);
      auto scores = tape.scale(tape.matmul_nt(qh, kh), inv_sqrt_dh);
      auto attn = tape.softmax_rows(scores);
      head_outs.push_back(tape.matmul(attn, vh));
    }
    auto ctx = tape.concat_cols(head_outs);
    auto o = tape.add_row(tape.matmul_nt(ctx, tape.param(*layer.wo)),
                          tape.param(*layer.bo));
    x = tape.add(x, o);

    auto h2 = tape.layer_norm(x, *layer.ln2_g, *layer.ln2_b);
    auto ff1 = tape.gelu(tape.add_row(
        tape.matmul_nt(h2, tape.param(*layer.ff_w1)), tape.param(*layer.ff_b1)));
    auto ff2 = tape.add_row(tape.matmul_nt(ff1, tape.param(*layer.ff_w2)),
                            tape.param(*layer.ff_b2));
    x = tape.add(x, ff2);
  }
  x = tape.layer_norm(x, *final_g_, *final_b_);
  auto cls = tape.pick_row(x, 0);
  auto projection = tape.add_row(tape.matmul_nt(cls, tape.param(*proj_w_)),
                                 tape.param(*proj_b_));
  auto logits = tape.add_row(tape.matmul_nt(projection, tape.param(*head_w_)),
                             tape.param(*head_b_));
  return {projection, logits};
}

std::vector<float> ContextModel::classify(const std::vector<int>& ids) const {
  Tape tape;
  const auto fwd = forward(tape, ids);
  const Tensor& logits = tape.val(fwd.logits);
  std::vector<float> out(logits.data.begin(), logits.data.end());
  if (cfg_.task == "intent") {
    float mx = out[0];
    for (float v : out) mx = std::max(mx, v);
    double sum = 0.0;
    for (float& v : out) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (float& v : out) v = static_cast<float>(v / sum);
  } else {
    for (float& v : out) v = 1.0f / (1.0f + std::exp(-v));
  }
  return out;
}

ContextEmbedding ContextModel::embed_context(const Conversation& conversation,
                                             int t,
                                             const HistorySpec& spec) const {
  const auto ids = build_history_sequence(tokenizer_, conversation, t, spec,
                                          /*include_current=*/false,
                                          cfg_.max_len);
  Tape tape;
  const auto fwd = forward(tape, ids);
  const Tensor& proj = tape.val(fwd.projection);
  ContextEmbedding emb;
  emb.values.assign(proj.data.begin(), proj.data.end());
  return emb;
}

void ContextModel::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["kind"] = "context";
  j["config"] = cfg_.to_json();
  j["tokenizer"] = tokenizer_.to_json();
  nn::save_checkpoint(path, j, params_);
}

ContextModel ContextModel::load(const std::string& path) {
  const auto ckpt = nn::load_checkpoint(path);
  if (ckpt.config.at("kind") != "context") {
    throw IoError("checkpoint is not a context model: " + path);
  }
  ContextModel model(ContextModelConfig::from_json(ckpt.config.at("config")),
                     Tokenizer::from_json(ckpt.config.at("tokenizer")), 0);
  nn::restore_params(ckpt, model.params_);
  return model;
}

}  // namespace dialslu
