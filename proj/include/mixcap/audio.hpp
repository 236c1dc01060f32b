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

namespace mixcap {

/// Canonical pipeline sample rate. All sources are resampled on ingest.
inline constexpr int kPipelineRate = 16000;

/// Mono waveform, float samples nominally in [-1, 1].
///
/// Immutable value type in spirit: operations return new clips instead of
/// mutating. Safe to share across threads once constructed.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kPipelineRate;

  AudioClip() = default;
  AudioClip(std::vector<float> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct SaveStats {
  std::size_t clipped_samples = 0;  // count of samples hard-clipped to +-1
};

/// Read a RIFF/WAVE file (PCM16 or IEEE float32, any rate, any channel
/// count) into a mono clip. Channels are averaged; int16 samples scale by
/// 1/32768. Throws NotWavError / UnsupportedEncodingError /
/// CorruptHeaderError / IoError.
AudioClip load_wav(const std::filesystem::path& path);

/// Write a clip as 16-bit PCM mono little-endian WAV. Samples outside
/// [-1, 1] are hard-clipped and counted. Empty clips are rejected before
/// any file is created.
SaveStats save_wav(const AudioClip& clip, const std::filesystem::path& path);

/// Band-limited (windowed-sinc) resampling to target_rate. Identity when
/// the rate already matches. Duration preserved within one sample period.
AudioClip resample(const AudioClip& clip, int target_rate);

/// Internal workhorse for resample and pitch shifting: map `samples`
/// sampled at src_rate onto dst_rate, both rates may be fractional.
std::vector<float> resample_ratio(const std::vector<float>& samples,
                                  double src_rate, double dst_rate);

/// Pad with trailing zeros or truncate to the prefix so the clip is
/// exactly round(target_seconds * rate) samples long. Idempotent.
AudioClip pad_or_truncate(const AudioClip& clip, double target_seconds);

}  // namespace mixcap
