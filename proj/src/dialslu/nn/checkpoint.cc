// dialslu/nn/checkpoint.cc

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

#include "dialslu/nn/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dialslu/util/errors.h"
#include "dialslu/util/rng.h"

namespace dialslu {
namespace nn {

namespace {

constexpr char kMagic[8] = {'D', 'S', 'L', 'U', 'C', 'K', 'P', '1'};

void put_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

}  // namespace

const Tensor& Checkpoint::at(const std::string& name) const {
  const auto it = tensors.find(name);
  if (it == tensors.end()) {
    throw ContractError("checkpoint is missing tensor: " + name);
  }
  return it->second;
}

void save_checkpoint(const std::string& path,
                     const nlohmann::ordered_json& config,
                     const ParamSet& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  const std::string cfg = config.dump();
  put_u32(os, static_cast<uint32_t>(cfg.size()));
  os.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  const auto all = params.all();
  put_u32(os, static_cast<uint32_t>(all.size()));
  for (const Param* p : all) {
    put_u32(os, static_cast<uint32_t>(p->name.size()));
    os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put_u32(os, static_cast<uint32_t>(p->value.rows));
    put_u32(os, static_cast<uint32_t>(p->value.cols));
    os.write(reinterpret_cast<const char*>(p->value.data.data()),
             static_cast<std::streamsize>(p->value.size() * sizeof(float)));
  }
  if (!os) throw IoError("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) {
    throw IoError("not a dialslu checkpoint: " + path);
  }
  const uint32_t cfg_len = get_u32(is);
  std::string cfg(cfg_len, '\0');
  is.read(cfg.data(), cfg_len);
  Checkpoint ckpt;
  ckpt.config = nlohmann::ordered_json::parse(cfg);
  const uint32_t count = get_u32(is);
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const uint32_t rows = get_u32(is);
    const uint32_t cols = get_u32(is);
    Tensor t(static_cast<int>(rows), static_cast<int>(cols));
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.size() * sizeof(float)));
    if (!is) throw IoError("truncated checkpoint: " + path);
    ckpt.order.push_back(name);
    ckpt.tensors.emplace(std::move(name), std::move(t));
  }
  return ckpt;
}

void restore_params(const Checkpoint& ckpt, ParamSet& params) {
  for (Param* p : params.all()) {
    const Tensor& t = ckpt.at(p->name);
    if (!t.same_shape(p->value)) {
      throw ShapeError("checkpoint tensor shape mismatch for " + p->name);
    }
    p->value = t;
  }
}

uint64_t checkpoint_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string bytes = ss.str();
  return fnv1a64(bytes);
}

}  // namespace nn
}  // namespace dialslu
