// dialslu/features/fft.h

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

#ifndef DIALSLU_FEATURES_FFT_H_
#define DIALSLU_FEATURES_FFT_H_

#include <complex>
#include <vector>

namespace dialslu {

// In-place iterative radix-2 FFT. x.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x);

// Power spectrum |X_k|^2 for k = 0..nfft/2 of a real frame zero-padded to
// nfft (power of two, >= frame length).
std::vector<double> power_spectrum(const float* frame, int len, int nfft);

}  // namespace dialslu

#endif  // DIALSLU_FEATURES_FFT_H_
