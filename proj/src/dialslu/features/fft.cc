// dialslu/features/fft.cc

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

#include "dialslu/features/fft.h"

#include <cmath>

#include "dialslu/util/errors.h"

namespace dialslu {

void fft_inplace(std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0) throw DomainError("fft size must be a power of two");

  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * 3.14159265358979323846 / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<double> power_spectrum(const float* frame, int len, int nfft) {
  std::vector<std::complex<double>> buf(static_cast<size_t>(nfft));
  for (int i = 0; i < len; ++i) buf[i] = std::complex<double>(frame[i], 0.0);
  fft_inplace(buf);
  std::vector<double> pow(static_cast<size_t>(nfft / 2 + 1));
  for (int k = 0; k <= nfft / 2; ++k) pow[k] = std::norm(buf[k]);
  return pow;
}

}  // namespace dialslu
