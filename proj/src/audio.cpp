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

#include "mixcap/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "mixcap/errors.hpp"

namespace mixcap {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());

  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw NotWavError("not a RIFF/WAVE file: " + path.string());
  }

  // Walk chunks; require fmt before data.
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    std::uint32_t chunk_size = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > bytes.size())
        throw CorruptHeaderError("truncated fmt chunk: " + path.string());
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        // Sub-format GUID starts with the effective format tag.
        if (chunk_size < 40 || body + 26 > bytes.size())
          throw CorruptHeaderError("truncated extensible fmt chunk: " + path.string());
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (body + chunk_size > bytes.size())
        throw CorruptHeaderError("data chunk exceeds file size: " + path.string());
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw CorruptHeaderError("missing fmt or data chunk: " + path.string());
  if (channels == 0 || rate == 0)
    throw CorruptHeaderError("zero channels or sample rate: " + path.string());

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatIeeeFloat && bits == 32;
  if (!pcm16 && !f32)
    throw UnsupportedEncodingError("unsupported encoding (format tag " +
                                   std::to_string(format) + ", " +
                                   std::to_string(bits) + " bit): " + path.string());

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(frames);
  const double inv_channels = 1.0 / channels;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        std::int16_t v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        acc += v / 32768.0;
      } else {
        float v;
        std::uint32_t u = read_u32(p);
        std::memcpy(&v, &u, 4);
        // non-finite float payloads read as silence
        acc += std::isfinite(v) ? v : 0.0f;
      }
    }
    clip.samples[i] = static_cast<float>(acc * inv_channels);
  }
  return clip;
}

SaveStats save_wav(const AudioClip& clip, const std::filesystem::path& path) {
  if (clip.empty()) throw InvalidArgumentError("save_wav: empty clip");

  SaveStats stats;
  std::vector<unsigned char> out;
  out.reserve(44 + clip.size() * 2);

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_bytes);

  // Symmetric 1/32768 scale so int16-sourced samples round-trip exactly.
  for (float s : clip.samples) {
    float x = s;
    if (x > 1.0f) {
      x = 1.0f;
      ++stats.clipped_samples;
    } else if (x < -1.0f) {
      x = -1.0f;
      ++stats.clipped_samples;
    }
    long v = std::lround(static_cast<double>(x) * 32768.0);
    v = std::clamp<long>(v, -32768, 32767);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }

  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  if (!of) throw IoError("cannot open for writing: " + path.string());
  of.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!of) throw IoError("short write: " + path.string());
  return stats;
}

std::vector<float> resample_ratio(const std::vector<float>& samples,
                                  double src_rate, double dst_rate) {
  if (samples.empty()) return {};

  // Windowed-sinc interpolation, 16 zero crossings per side, Hann window.
  // When downsampling the kernel widens by 1/scale to stay band-limited.
  constexpr int kZeroCrossings = 16;
  const double scale = std::min(1.0, dst_rate / src_rate);
  const double half_width = kZeroCrossings / scale;
  const int n_in = static_cast<int>(samples.size());
  const auto n_out = static_cast<std::size_t>(
      std::llround(samples.size() * dst_rate / src_rate));

  auto sinc = [](double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
  };

  std::vector<float> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double center = static_cast<double>(j) * src_rate / dst_rate;
    const int lo = std::max(0, static_cast<int>(std::ceil(center - half_width)));
    const int hi = std::min(n_in - 1, static_cast<int>(std::floor(center + half_width)));
    double acc = 0.0, norm = 0.0;
    for (int m = lo; m <= hi; ++m) {
      const double t = static_cast<double>(m) - center;
      const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * t / half_width);
      const double h = scale * sinc(scale * t) * w;
      acc += h * samples[static_cast<std::size_t>(m)];
      norm += h;
    }
    // unity DC gain: divide by the truncated-kernel sum
    out[j] = static_cast<float>(norm > 1e-12 ? acc / norm : acc);
  }
  return out;
}

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw InvalidArgumentError("resample: target_rate must be > 0");
  if (clip.sample_rate == target_rate) return clip;
  AudioClip out;
  out.sample_rate = target_rate;
  out.samples = resample_ratio(clip.samples, clip.sample_rate, target_rate);
  return out;
}

AudioClip pad_or_truncate(const AudioClip& clip, double target_seconds) {
  if (target_seconds <= 0)
    throw InvalidArgumentError("pad_or_truncate: target_seconds must be > 0");
  const auto target = static_cast<std::size_t>(
      std::llround(target_seconds * clip.sample_rate));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = clip.samples;
  out.samples.resize(target, 0.0f);  // truncates or zero-pads
  return out;
}

}  // namespace mixcap
