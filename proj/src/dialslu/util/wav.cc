// dialslu/util/wav.cc

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

#include "dialslu/util/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dialslu/util/errors.h"

namespace dialslu {

namespace {

void put_u32(std::ofstream& os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void put_u16(std::ofstream& os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void write_wav(const std::string& path, const Waveform& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  const uint32_t data_bytes = n * 2;
  const uint32_t rate = static_cast<uint32_t>(w.sample_rate);

  os.write("RIFF", 4);
  put_u32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(os, 16);
  put_u16(os, 1);  // PCM
  put_u16(os, 1);  // mono
  put_u32(os, rate);
  put_u32(os, rate * 2);  // byte rate
  put_u16(os, 2);         // block align
  put_u16(os, 16);        // bits per sample
  os.write("data", 4);
  put_u32(os, data_bytes);

  std::vector<char> buf(data_bytes);
  for (uint32_t i = 0; i < n; ++i) {
    float x = std::clamp(w.samples[i], -1.0f, 1.0f);
    int16_t q = static_cast<int16_t>(std::lrint(x * 32767.0f));
    buf[2 * i] = static_cast<char>(q & 0xff);
    buf[2 * i + 1] = static_cast<char>((q >> 8) & 0xff);
  }
  os.write(buf.data(), buf.size());
  if (!os) throw IoError("short write: " + path);
}

Waveform read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() < 44 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  Waveform w;
  size_t pos = 12;
  bool have_fmt = false;
  while (pos + 8 <= raw.size()) {
    const char* tag = reinterpret_cast<const char*>(raw.data() + pos);
    const uint32_t len = get_u32(raw.data() + pos + 4);
    const size_t body = pos + 8;
    if (std::memcmp(tag, "fmt ", 4) == 0 && body + 16 <= raw.size()) {
      if (get_u16(raw.data() + body) != 1 || get_u16(raw.data() + body + 2) != 1 ||
          get_u16(raw.data() + body + 14) != 16) {
        throw IoError("unsupported WAV encoding (want 16-bit mono PCM): " + path);
      }
      w.sample_rate = static_cast<int>(get_u32(raw.data() + body + 4));
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw IoError("data chunk before fmt: " + path);
      const size_t end = std::min(raw.size(), body + len);
      w.samples.reserve((end - body) / 2);
      for (size_t i = body; i + 1 < end; i += 2) {
        int16_t q = static_cast<int16_t>(raw[i] | (raw[i + 1] << 8));
        w.samples.push_back(static_cast<float>(q) / 32767.0f);
      }
      return w;
    }
    pos = body + len + (len & 1);
  }
  throw IoError("no data chunk: " + path);
}

}  // namespace dialslu
