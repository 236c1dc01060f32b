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

#include "mixcap/features.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "mixcap/errors.hpp"
#include "mixcap/fft.hpp"

namespace mixcap {

namespace {
constexpr double kLogEps = 1e-10;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_filterbank(std::size_t n_fft, double sample_rate,
                                   double f_min, double f_max, std::size_t n_mels) {
  const std::size_t n_bins = n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);

  // n_mels + 2 equally spaced mel points -> triangle edges and centers.
  std::vector<double> hz_points(n_mels + 2);
  for (std::size_t i = 0; i < hz_points.size(); ++i)
    hz_points[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                             static_cast<double>(n_mels + 1));

  std::vector<double> fb(n_mels * n_bins, 0.0);
  const double bin_hz = sample_rate / static_cast<double>(n_fft);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = hz_points[m], center = hz_points[m + 1], right = hz_points[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > left && f < center)
        w = (f - left) / (center - left);
      else if (f >= center && f < right)
        w = (right - f) / (right - center);
      fb[m * n_bins + k] = w;
    }
  }
  return fb;
}

FeatureMatrix logmel(const AudioClip& clip) {
  if (clip.sample_rate != kPipelineRate)
    throw InvalidArgumentError("logmel: clip must be at 16 kHz");
  if (clip.size() < kFeatureWindow)
    throw ClipTooShortError("logmel: clip shorter than one analysis window");

  static const std::vector<double> window = hamming_window(kFeatureWindow);
  static const std::vector<double> fb = mel_filterbank(
      kFeatureWindow, kPipelineRate, 0.0, kPipelineRate / 2.0, kMelBins);

  const Stft spec = stft(clip.samples, window, kFeatureHop);
  const std::size_t n_bins = kFeatureWindow / 2 + 1;

  FeatureMatrix out;
  out.n_frames = spec.frames.size();
  out.n_bins = kMelBins;
  out.frame_hop = kFeatureHop;
  out.values.resize(out.n_frames * kMelBins);

  std::vector<double> power(n_bins);
  for (std::size_t f = 0; f < out.n_frames; ++f) {
    for (std::size_t k = 0; k < n_bins; ++k)
      power[k] = std::norm(spec.frames[f][k]);
    for (std::size_t m = 0; m < kMelBins; ++m) {
      double acc = 0.0;
      const double* row = fb.data() + m * n_bins;
      for (std::size_t k = 0; k < n_bins; ++k) acc += row[k] * power[k];
      out.values[f * kMelBins + m] = static_cast<float>(std::log(acc + kLogEps));
    }
  }
  return out;
}

void save_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());

  const auto frames = static_cast<std::uint32_t>(m.n_frames);
  const auto bins = static_cast<std::uint32_t>(m.n_bins);
  unsigned char hdr[8];
  for (int i = 0; i < 4; ++i) hdr[i] = static_cast<unsigned char>((frames >> (8 * i)) & 0xFF);
  for (int i = 0; i < 4; ++i) hdr[4 + i] = static_cast<unsigned char>((bins >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(hdr), 8);

  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * 4));
  if (!out) throw IoError("short write: " + path.string());

  nlohmann::ordered_json meta;
  meta["rows"] = m.n_frames;
  meta["cols"] = m.n_bins;
  meta["dtype"] = "float32";
  meta["byte_order"] = "little";
  meta["layout"] = "row-major";
  meta["frame_hop"] = m.frame_hop;
  std::ofstream side(path.string() + ".json", std::ios::trunc);
  side << meta.dump(2) << "\n";
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  unsigned char hdr[8];
  in.read(reinterpret_cast<char*>(hdr), 8);
  if (in.gcount() != 8) throw CorruptHeaderError("feature file too short: " + path.string());

  std::uint32_t frames = 0, bins = 0;
  for (int i = 0; i < 4; ++i) frames |= static_cast<std::uint32_t>(hdr[i]) << (8 * i);
  for (int i = 0; i < 4; ++i) bins |= static_cast<std::uint32_t>(hdr[4 + i]) << (8 * i);

  FeatureMatrix m;
  m.n_frames = frames;
  m.n_bins = bins;
  m.values.resize(static_cast<std::size_t>(frames) * bins);
  in.read(reinterpret_cast<char*>(m.values.data()),
          static_cast<std::streamsize>(m.values.size() * 4));
  if (static_cast<std::size_t>(in.gcount()) != m.values.size() * 4)
    throw CorruptHeaderError("feature payload truncated: " + path.string());
  return m;
}

void save_feature_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (std::size_t f = 0; f < m.n_frames; ++f) {
    for (std::size_t b = 0; b < m.n_bins; ++b) {
      if (b) out << ',';
      out << m.at(f, b);
    }
    out << '\n';
  }
}

}  // namespace mixcap
