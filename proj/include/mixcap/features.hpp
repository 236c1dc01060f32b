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

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mixcap/audio.hpp"

namespace mixcap {

inline constexpr std::size_t kMelBins = 64;
inline constexpr std::size_t kFeatureWindow = 1024;
inline constexpr std::size_t kFeatureHop = 160;

/// T x 64 matrix of log-mel energies, row-major.
struct FeatureMatrix {
  std::size_t n_frames = 0;
  std::size_t n_bins = kMelBins;
  std::vector<float> values;  // n_frames * n_bins
  std::size_t frame_hop = kFeatureHop;

  float at(std::size_t frame, std::size_t bin) const {
    return values[frame * n_bins + bin];
  }
};

/// Log-mel spectrogram: 1024-point Hamming window, hop 160, 64 HTK-mel
/// triangular filters spanning 0-8000 Hz, log(power + 1e-10).
///
/// No center padding: frame count = 1 + floor((len - 1024) / 160). The
/// clip must be at 16 kHz and at least one window long.
FeatureMatrix logmel(const AudioClip& clip);

/// Triangular mel filterbank used by logmel, (kMelBins x n_fft/2+1),
/// row-major. Exposed so downstream code can reason about bin centers.
std::vector<double> mel_filterbank(std::size_t n_fft, double sample_rate,
                                   double f_min, double f_max, std::size_t n_mels);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Binary export: 8-byte header (two uint32 LE: frames, bins) followed by
/// float32 LE row-major values, plus a JSON sidecar at path + ".json".
void save_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

/// Debug CSV: one frame per line, comma-separated bins.
void save_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path);

}  // namespace mixcap
