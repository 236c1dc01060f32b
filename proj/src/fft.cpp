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

#include "mixcap/fft.hpp"

#include <cmath>
#include <numbers>

#include "mixcap/errors.hpp"

namespace mixcap {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InvalidArgumentError("fft: size must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                       (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  return w;
}

std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
  return w;
}

Stft stft(const std::vector<float>& samples, const std::vector<double>& window,
          std::size_t hop) {
  const std::size_t win = window.size();
  if (samples.size() < win)
    throw ClipTooShortError("stft: clip shorter than one analysis window");
  const std::size_t n_frames = 1 + (samples.size() - win) / hop;
  const std::size_t n_bins = win / 2 + 1;

  Stft out;
  out.win = win;
  out.hop = hop;
  out.frames.assign(n_frames, {});

  std::vector<std::complex<double>> buf(win);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < win; ++i)
      buf[i] = {static_cast<double>(samples[start + i]) * window[i], 0.0};
    fft_inplace(buf, false);
    out.frames[f].assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n_bins));
  }
  return out;
}

std::vector<float> istft(const Stft& spectrum, const std::vector<double>& window,
                         std::size_t target_length) {
  const std::size_t win = spectrum.win;
  const std::size_t hop = spectrum.hop;
  const std::size_t n_frames = spectrum.frames.size();
  const std::size_t full_len = n_frames == 0 ? 0 : (n_frames - 1) * hop + win;

  std::vector<double> acc(full_len, 0.0);
  std::vector<double> wsum(full_len, 0.0);
  std::vector<std::complex<double>> buf(win);

  for (std::size_t f = 0; f < n_frames; ++f) {
    const auto& half = spectrum.frames[f];
    for (std::size_t k = 0; k < half.size(); ++k) buf[k] = half[k];
    for (std::size_t k = half.size(); k < win; ++k)
      buf[k] = std::conj(buf[win - k]);
    fft_inplace(buf, true);
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < win; ++i) {
      acc[start + i] += buf[i].real() * window[i];
      wsum[start + i] += window[i] * window[i];
    }
  }

  std::vector<float> out(target_length, 0.0f);
  const std::size_t n = std::min(target_length, full_len);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<float>(wsum[i] > 1e-9 ? acc[i] / wsum[i] : acc[i]);
  return out;
}

}  // namespace mixcap
