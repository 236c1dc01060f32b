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

#include "mixcap/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "mixcap/errors.hpp"
#include "mixcap/fft.hpp"

namespace mixcap {

namespace {
double wrap_pi(double x) {
  return x - 2.0 * std::numbers::pi * std::round(x / (2.0 * std::numbers::pi));
}
}  // namespace

const char* transform_kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::Volume: return "volume";
    case TransformKind::Pitch: return "pitch";
    case TransformKind::Speed: return "speed";
    case TransformKind::Duration: return "duration";
  }
  return "unknown";
}

TransformKind transform_kind_from_name(const std::string& name) {
  if (name == "volume") return TransformKind::Volume;
  if (name == "pitch") return TransformKind::Pitch;
  if (name == "speed") return TransformKind::Speed;
  if (name == "duration") return TransformKind::Duration;
  throw InvalidArgumentError("unknown transform kind: " + name);
}

std::string keyword_for(TransformKind kind, double parameter) {
  switch (kind) {
    case TransformKind::Volume:
      return parameter >= 0 ? "loud" : "quiet";
    case TransformKind::Pitch:
      return parameter >= 0 ? "high-pitch" : "low-pitch";
    case TransformKind::Speed:
      return parameter >= 1.0 ? "fast" : "slow";
    case TransformKind::Duration:
      return "short";
  }
  return "";
}

std::string keyword_antonym(const std::string& keyword) {
  if (keyword == "loud") return "quiet";
  if (keyword == "quiet") return "loud";
  if (keyword == "high-pitch") return "low-pitch";
  if (keyword == "low-pitch") return "high-pitch";
  if (keyword == "fast") return "slow";
  if (keyword == "slow") return "fast";
  return keyword;
}

TransformSpec make_transform(TransformKind kind, double parameter) {
  TransformSpec t;
  t.kind = kind;
  t.parameter = parameter;
  t.keywords = {keyword_for(kind, parameter)};
  return t;
}

AudioClip apply_gain(const AudioClip& clip, double gain_db) {
  if (!std::isfinite(gain_db))
    throw InvalidArgumentError("apply_gain: gain_db must be finite");
  const double g = std::pow(10.0, gain_db / 20.0);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(clip.size());
  for (std::size_t i = 0; i < clip.size(); ++i)
    out.samples[i] = static_cast<float>(clip.samples[i] * g);
  return out;
}

AudioClip phase_vocoder_stretch(const AudioClip& clip, double rate,
                                std::size_t window_size, std::size_t hop) {
  if (rate <= 0) throw InvalidArgumentError("stretch rate must be > 0");
  if (window_size == 0 || (window_size & (window_size - 1)) != 0 || hop == 0)
    throw InvalidArgumentError("stretch window must be a power of two, hop > 0");
  if (clip.size() < window_size)
    throw ClipTooShortError("time stretch: clip shorter than one analysis window");

  const std::vector<double> window = hann_window(window_size);
  Stft spec = stft(clip.samples, window, hop);
  const std::size_t n_in = spec.frames.size();
  const std::size_t n_bins = window_size / 2 + 1;

  // One zero frame of padding so interpolation at the tail stays in range.
  spec.frames.emplace_back(n_bins, std::complex<double>(0.0, 0.0));

  const std::size_t n_out =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n_in) / rate));

  // Expected phase advance per hop for each bin.
  std::vector<double> advance(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k)
    advance[k] = 2.0 * std::numbers::pi * static_cast<double>(k) *
                 static_cast<double>(hop) / static_cast<double>(window_size);

  std::vector<double> phase_acc(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k)
    phase_acc[k] = std::arg(spec.frames[0][k]);

  Stft out;
  out.win = window_size;
  out.hop = hop;
  out.frames.assign(n_out, {});

  for (std::size_t step = 0; step < n_out; ++step) {
    const double t = static_cast<double>(step) * rate;
    const std::size_t f0 = std::min(static_cast<std::size_t>(t), n_in - 1);
    const std::size_t f1 = f0 + 1;  // padded frame keeps this valid
    const double alpha = t - static_cast<double>(f0);

    auto& frame = out.frames[step];
    frame.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const std::complex<double> c0 = spec.frames[f0][k];
      const std::complex<double> c1 = spec.frames[f1][k];
      const double mag = (1.0 - alpha) * std::abs(c0) + alpha * std::abs(c1);
      frame[k] = std::polar(mag, phase_acc[k]);
      const double dphi = wrap_pi(std::arg(c1) - std::arg(c0) - advance[k]);
      phase_acc[k] += advance[k] + dphi;
    }
  }

  const auto target = static_cast<std::size_t>(
      std::llround(static_cast<double>(clip.size()) / rate));
  AudioClip result;
  result.sample_rate = clip.sample_rate;
  result.samples = istft(out, window, target);
  return result;
}

AudioClip time_stretch(const AudioClip& clip, double rate) {
  if (rate < 0.8 || rate > 1.2)
    throw InvalidArgumentError("time_stretch: rate must be in [0.8, 1.2]");
  return phase_vocoder_stretch(clip, rate);
}

AudioClip pitch_shift(const AudioClip& clip, double octaves) {
  if (octaves < -0.5 || octaves > 0.5)
    throw InvalidArgumentError("pitch_shift: octaves must be in [-0.5, 0.5]");
  const double factor = std::exp2(octaves);

  // Stretch so duration scales by `factor`, then resample back: frequencies
  // scale by `factor`, duration returns to the original within rounding.
  AudioClip stretched = phase_vocoder_stretch(clip, 1.0 / factor);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = resample_ratio(stretched.samples, factor, 1.0);
  return out;
}

AudioClip halve_duration(const AudioClip& clip, Rng& rng) {
  if (clip.size() < 2)
    throw InvalidArgumentError("halve_duration: clip must have at least 2 samples");
  const std::size_t keep = clip.size() / 2;
  const auto start = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(clip.size() - keep)));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(start + keep));
  return out;
}

AudioClip concat_with_silence(const AudioClip& c1, const AudioClip& c2) {
  if (c1.sample_rate != c2.sample_rate)
    throw RateMismatchError("concat: sample rates differ");
  const auto gap = static_cast<std::size_t>(std::llround(0.5 * c1.sample_rate));
  AudioClip out;
  out.sample_rate = c1.sample_rate;
  out.samples.reserve(c1.size() + gap + c2.size());
  out.samples.insert(out.samples.end(), c1.samples.begin(), c1.samples.end());
  out.samples.insert(out.samples.end(), gap, 0.0f);
  out.samples.insert(out.samples.end(), c2.samples.begin(), c2.samples.end());
  return out;
}

double rms(const float* samples, std::size_t count) {
  if (count == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    acc += static_cast<double>(samples[i]) * samples[i];
  return std::sqrt(acc / static_cast<double>(count));
}

AudioClip mix_at_snr(const AudioClip& signal, const AudioClip& noise,
                     double snr_db, std::size_t offset_samples, RmsScope scope) {
  if (signal.sample_rate != noise.sample_rate)
    throw RateMismatchError("mix: sample rates differ");
  if (snr_db < -5.0 || snr_db > 5.0)
    throw InvalidArgumentError("mix: snr_db must be in [-5, 5]");
  if (offset_samples > signal.size())
    throw InvalidArgumentError("mix: offset beyond end of signal");

  const std::size_t overlap_end = std::min(signal.size(), offset_samples + noise.size());
  const std::size_t overlap = overlap_end > offset_samples ? overlap_end - offset_samples : 0;

  double rms_s, rms_n;
  if (scope == RmsScope::Overlap && overlap > 0) {
    rms_s = rms(signal.samples.data() + offset_samples, overlap);
    rms_n = rms(noise.samples.data(), overlap);
  } else {
    rms_s = rms(signal.samples.data(), signal.size());
    rms_n = rms(noise.samples.data(), noise.size());
  }
  if (rms_s <= 0.0 || rms_n <= 0.0)
    throw SilentInputError("mix: zero RMS input, SNR undefined");

  // RMS(signal) / RMS(g*noise) = 10^(snr/20)
  const double g = rms_s / (rms_n * std::pow(10.0, snr_db / 20.0));

  AudioClip out;
  out.sample_rate = signal.sample_rate;
  out.samples.assign(std::max(signal.size(), offset_samples + noise.size()), 0.0f);
  std::copy(signal.samples.begin(), signal.samples.end(), out.samples.begin());
  for (std::size_t i = 0; i < noise.size(); ++i)
    out.samples[offset_samples + i] +=
        static_cast<float>(g * static_cast<double>(noise.samples[i]));
  return out;
}

}  // namespace mixcap
