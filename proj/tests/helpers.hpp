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

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mixcap/audio.hpp"
#include "mixcap/composer.hpp"
#include "mixcap/errors.hpp"
#include "mixcap/preprocess.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("mixcap-" + tag + "-" + std::to_string(rd()) + "-" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline mixcap::AudioClip make_tone(double freq_hz, double seconds, int rate,
                                   double amplitude = 0.5) {
  mixcap::AudioClip clip;
  clip.sample_rate = rate;
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate));
  return clip;
}

inline mixcap::AudioClip make_noise(double seconds, int rate, std::uint64_t seed,
                                    double amplitude = 0.3) {
  std::mt19937_64 gen(seed);
  mixcap::AudioClip clip;
  clip.sample_rate = rate;
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    clip.samples[i] = static_cast<float>(amplitude * (2.0 * u - 1.0));
  }
  return clip;
}

// ---------------------------------------------------------------------------
// Independent spectral-peak oracle. Deliberately separate from the library
// FFT: recursive transform plus Hann window and parabolic interpolation.

inline void fft_recursive(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  std::vector<std::complex<double>> even(n / 2), odd(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    even[i] = a[2 * i];
    odd[i] = a[2 * i + 1];
  }
  fft_recursive(even);
  fft_recursive(odd);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto t = std::polar(1.0, -2.0 * std::numbers::pi * k / n) * odd[k];
    a[k] = even[k] + t;
    a[k + n / 2] = even[k] - t;
  }
}

/// Frequency of the strongest spectral component, in Hz.
inline double dominant_frequency_hz(const std::vector<float>& samples, double rate) {
  std::size_t n = 1;
  while (n < samples.size()) n <<= 1;
  std::vector<std::complex<double>> buf(n, {0.0, 0.0});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (samples.size() - 1));
    buf[i] = {samples[i] * w, 0.0};
  }
  fft_recursive(buf);

  std::size_t peak = 1;
  double peak_mag = 0.0;
  for (std::size_t k = 1; k + 1 < n / 2; ++k) {
    const double m = std::abs(buf[k]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = k;
    }
  }
  // Parabolic interpolation on log magnitudes.
  const double la = std::log(std::abs(buf[peak - 1]) + 1e-300);
  const double lb = std::log(std::abs(buf[peak]) + 1e-300);
  const double lc = std::log(std::abs(buf[peak + 1]) + 1e-300);
  const double denom = la - 2.0 * lb + lc;
  const double delta = std::abs(denom) < 1e-12 ? 0.0 : 0.5 * (la - lc) / denom;
  return (static_cast<double>(peak) + delta) * rate / static_cast<double>(n);
}

inline double rms_of(const std::vector<float>& samples) {
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return samples.empty() ? 0.0 : std::sqrt(acc / samples.size());
}

// ---------------------------------------------------------------------------
// In-memory clip source for composer tests.

class MemorySource : public mixcap::ClipSource {
 public:
  void add(mixcap::SourceClipMeta meta, mixcap::AudioClip clip) {
    const std::string id = meta.id;
    items_[id] = {std::move(meta), std::move(clip)};
  }
  const mixcap::SourceClipMeta& meta(const std::string& id) const override {
    const auto it = items_.find(id);
    if (it == items_.end()) throw mixcap::MissingSourceError("unknown clip id: " + id);
    return it->second.first;
  }
  mixcap::AudioClip load(const std::string& id) const override {
    meta(id);  // raises MissingSourceError for unknown ids
    return items_.find(id)->second.second;
  }
  std::vector<mixcap::SourceClipMeta> corpus() const {
    std::vector<mixcap::SourceClipMeta> out;
    for (const auto& [id, item] : items_) out.push_back(item.first);
    return out;
  }

 private:
  std::map<std::string, std::pair<mixcap::SourceClipMeta, mixcap::AudioClip>> items_;
};

// ---------------------------------------------------------------------------
// Synthetic on-disk corpus for pipeline tests.

struct CorpusOptions {
  std::size_t clips = 12;
  std::uint64_t seed = 1234;
  bool include_rejects = false;  // add short and excluded-label clips
};

/// Writes WAV files plus a JSONL manifest under dir; returns the manifest
/// path. Clips are tones with a small noise floor, 2.2-4.0 s, mostly
/// 16 kHz with some 32 kHz and 8 kHz entries.
inline std::filesystem::path write_synthetic_corpus(const std::filesystem::path& dir,
                                                    const CorpusOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "clips");
  const char* kLabels[] = {"dog",  "rain",   "car",  "train horn", "bird",
                           "engine", "door", "bell", "siren",      "wind"};
  std::mt19937_64 gen(options.seed);
  auto uniform = [&gen](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  };

  std::ofstream manifest(dir / "sources.jsonl", std::ios::trunc);
  for (std::size_t i = 0; i < options.clips; ++i) {
    const double seconds = uniform(2.2, 4.0);
    const double freq = uniform(120.0, 2200.0);
    int rate = 16000;
    if (i % 7 == 3) rate = 32000;
    if (i % 11 == 5) rate = 8000;

    mixcap::AudioClip clip = make_tone(freq, seconds, rate, 0.4);
    const mixcap::AudioClip noise = make_noise(seconds, rate, options.seed + i, 0.02);
    for (std::size_t s = 0; s < clip.size() && s < noise.size(); ++s)
      clip.samples[s] += noise.samples[s];

    const std::string name = "clip" + std::to_string(i) + ".wav";
    mixcap::save_wav(clip, dir / "clips" / name);
    manifest << "{\"id\":\"c" << i << "\",\"audio_path\":\"clips/" << name
             << "\",\"labels\":[\"" << kLabels[i % 10] << "\"],\"start_s\":0.0,"
             << "\"end_s\":" << clip.duration_seconds() << "}\n";
  }
  if (options.include_rejects) {
    mixcap::AudioClip shorty = make_tone(500.0, 1.0, 16000, 0.4);
    mixcap::save_wav(shorty, dir / "clips" / "short.wav");
    manifest << "{\"id\":\"short\",\"audio_path\":\"clips/short.wav\",\"labels\":"
             << "[\"dog\"],\"start_s\":0.0,\"end_s\":1.0}\n";
    mixcap::AudioClip excluded = make_tone(300.0, 3.0, 16000, 0.4);
    mixcap::save_wav(excluded, dir / "clips" / "excluded.wav");
    manifest << "{\"id\":\"excluded\",\"audio_path\":\"clips/excluded.wav\",\"labels\":"
             << "[\"unknown\"],\"start_s\":0.0,\"end_s\":3.0}\n";
  }
  return dir / "sources.jsonl";
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace testutil
