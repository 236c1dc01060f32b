// Copyright 2026 The mixcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mixcap {

/// In-place radix-2 Cooley-Tukey FFT. n must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

/// Window shapes used by the pipeline. Periodic variants (denominator N),
/// the usual choice for STFT analysis.
std::vector<double> hann_window(std::size_t n);
std::vector<double> hamming_window(std::size_t n);

/// One STFT frame per hop, frame f covering samples [f*hop, f*hop+win).
/// No center padding: frame count = 1 + floor((len - win) / hop).
/// Each row holds win/2+1 one-sided complex bins.
struct Stft {
  std::vector<std::vector<std::complex<double>>> frames;
  std::size_t win = 0;
  std::size_t hop = 0;
};

Stft stft(const std::vector<float>& samples, const std::vector<double>& window,
          std::size_t hop);

/// Weighted overlap-add inverse of `stft` with the same window/hop,
/// normalized per sample by the summed squared window.
std::vector<float> istft(const Stft& spectrum, const std::vector<double>& window,
                         std::size_t target_length);

}  // namespace mixcap
