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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "helpers.hpp"
#include "mixcap/audio.hpp"
#include "mixcap/errors.hpp"

using namespace mixcap;

namespace {

/// Hand-rolled WAV writer independent of save_wav, for loader tests.
void write_wav_raw(const std::filesystem::path& path, std::uint16_t format,
                   std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                   const std::vector<unsigned char>& payload) {
  std::vector<unsigned char> out;
  auto u32 = [&out](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  };
  auto u16 = [&out](std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  };
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  u32(36 + static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  u32(static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

std::vector<unsigned char> int16_payload(const std::vector<std::int16_t>& values) {
  std::vector<unsigned char> bytes;
  for (std::int16_t v : values) {
    bytes.push_back(static_cast<unsigned char>(v & 0xFF));
    bytes.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  }
  return bytes;
}

}  // namespace

TEST_CASE("silent mono file round-trips as zeros") {
  testutil::TempDir dir("wav-zeros");
  write_wav_raw(dir.path / "z.wav", 1, 1, 16000, 16,
                int16_payload(std::vector<std::int16_t>(16000, 0)));
  const AudioClip clip = load_wav(dir.path / "z.wav");
  CHECK(clip.sample_rate == 16000);
  CHECK(clip.size() == 16000);
  for (float s : clip.samples) CHECK(s == 0.0f);
}

TEST_CASE("stereo +0.5/-0.5 averages to zeros") {
  testutil::TempDir dir("wav-stereo");
  std::vector<std::int16_t> interleaved;
  for (int i = 0; i < 100; ++i) {
    interleaved.push_back(16384);   // +0.5
    interleaved.push_back(-16384);  // -0.5
  }
  write_wav_raw(dir.path / "s.wav", 1, 2, 16000, 16, int16_payload(interleaved));
  const AudioClip clip = load_wav(dir.path / "s.wav");
  CHECK(clip.size() == 100);
  for (float s : clip.samples) CHECK(s == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("int16 full-scale maps to 32767/32768") {
  testutil::TempDir dir("wav-scale");
  write_wav_raw(dir.path / "m.wav", 1, 1, 16000, 16, int16_payload({32767, -32768}));
  const AudioClip clip = load_wav(dir.path / "m.wav");
  CHECK(clip.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-9));
  CHECK(clip.samples[1] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("float32 input decodes") {
  testutil::TempDir dir("wav-f32");
  std::vector<unsigned char> payload;
  for (float v : {0.25f, -0.75f}) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    for (int i = 0; i < 4; ++i) payload.push_back(static_cast<unsigned char>((u >> (8 * i)) & 0xFF));
  }
  write_wav_raw(dir.path / "f.wav", 3, 1, 44100, 32, payload);
  const AudioClip clip = load_wav(dir.path / "f.wav");
  CHECK(clip.sample_rate == 44100);
  CHECK(clip.samples[0] == doctest::Approx(0.25));
  CHECK(clip.samples[1] == doctest::Approx(-0.75));
}

TEST_CASE("loader failure modes are distinct") {
  testutil::TempDir dir("wav-errors");

  std::ofstream(dir.path / "not.wav") << "definitely not RIFF data here";
  CHECK_THROWS_AS(load_wav(dir.path / "not.wav"), NotWavError);

  // 8-bit PCM is unsupported.
  write_wav_raw(dir.path / "u8.wav", 1, 1, 16000, 8, {0x80, 0x80});
  CHECK_THROWS_AS(load_wav(dir.path / "u8.wav"), UnsupportedEncodingError);

  // RIFF/WAVE magic but no fmt/data chunks.
  std::vector<unsigned char> stub = {'R', 'I', 'F', 'F', 4, 0, 0, 0, 'W', 'A', 'V', 'E'};
  std::ofstream(dir.path / "trunc.wav", std::ios::binary)
      .write(reinterpret_cast<const char*>(stub.data()), static_cast<std::streamsize>(stub.size()));
  CHECK_THROWS_AS(load_wav(dir.path / "trunc.wav"), CorruptHeaderError);

  CHECK_THROWS_AS(load_wav(dir.path / "missing.wav"), IoError);
}

TEST_CASE("save/load round trip within one quantization step") {
  testutil::TempDir dir("wav-roundtrip");
  const AudioClip tone = testutil::make_tone(440.0, 0.5, 16000, 0.25);
  save_wav(tone, dir.path / "t.wav");
  const AudioClip back = load_wav(dir.path / "t.wav");
  REQUIRE(back.size() == tone.size());
  for (std::size_t i = 0; i < tone.size(); ++i)
    CHECK(std::abs(back.samples[i] - tone.samples[i]) <= 1.0 / 32768.0);
}

TEST_CASE("out-of-range samples clip to full scale and are counted") {
  testutil::TempDir dir("wav-clip");
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples = {1.5f, -2.0f, 0.0f};
  const SaveStats stats = save_wav(clip, dir.path / "c.wav");
  CHECK(stats.clipped_samples == 2);
  const AudioClip back = load_wav(dir.path / "c.wav");
  CHECK(back.samples[0] == doctest::Approx(32767.0 / 32768.0));
  CHECK(back.samples[1] == doctest::Approx(-1.0));
}

TEST_CASE("saving an empty clip fails before creating a file") {
  testutil::TempDir dir("wav-empty");
  AudioClip clip;
  clip.sample_rate = 16000;
  CHECK_THROWS_AS(save_wav(clip, dir.path / "e.wav"), InvalidArgumentError);
  CHECK(!std::filesystem::exists(dir.path / "e.wav"));
}

TEST_CASE("resample at the same rate is bit-identical") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  const AudioClip out = resample(tone, 16000);
  CHECK(out.samples == tone.samples);
}

TEST_CASE("32 kHz second becomes 16000 samples") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 32000);
  const AudioClip out = resample(tone, 16000);
  CHECK(out.sample_rate == 16000);
  CHECK(std::llabs(static_cast<long long>(out.size()) - 16000) <= 1);
}

TEST_CASE("48->16 kHz keeps a 440 Hz tone within 2 Hz") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 48000);
  const AudioClip out = resample(tone, 16000);
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0).epsilon(2.0 / 440.0));
}

TEST_CASE("resample round trip preserves duration within two sample periods") {
  const int rates[] = {8000, 22050, 44100};
  for (int r : rates) {
    const AudioClip tone = testutil::make_tone(300.0, 1.3, 16000);
    const AudioClip back = resample(resample(tone, r), 16000);
    CHECK(std::llabs(static_cast<long long>(back.size()) -
                     static_cast<long long>(tone.size())) <= 2);
  }
}

TEST_CASE("pad_or_truncate hits the exact target length") {
  const int rate = 16000;

  SUBCASE("7 s padded to 10 s: trailing 48000 zeros") {
    const AudioClip clip = testutil::make_tone(200.0, 7.0, rate);
    const AudioClip out = pad_or_truncate(clip, 10.0);
    REQUIRE(out.size() == 160000);
    for (std::size_t i = 112000; i < 160000; ++i) CHECK(out.samples[i] == 0.0f);
    CHECK(out.samples[100] == clip.samples[100]);
  }

  SUBCASE("10 s clip unchanged") {
    const AudioClip clip = testutil::make_tone(200.0, 10.0, rate);
    const AudioClip out = pad_or_truncate(clip, 10.0);
    CHECK(out.samples == clip.samples);
  }

  SUBCASE("12 s truncated to the first 160000 samples") {
    const AudioClip clip = testutil::make_tone(200.0, 12.0, rate);
    const AudioClip out = pad_or_truncate(clip, 10.0);
    REQUIRE(out.size() == 160000);
    for (std::size_t i : {0ul, 1000ul, 159999ul}) CHECK(out.samples[i] == clip.samples[i]);
  }
}

TEST_CASE("pad_or_truncate is idempotent") {
  mixcap::Rng seeds(77);
  for (int trial = 0; trial < 20; ++trial) {
    const double seconds = seeds.uniform(0.1, 12.0);
    const double target = seeds.uniform(0.5, 11.0);
    const AudioClip clip = testutil::make_noise(seconds, 16000, 1000 + trial);
    const AudioClip once = pad_or_truncate(clip, target);
    const AudioClip twice = pad_or_truncate(once, target);
    CHECK(once.samples == twice.samples);
  }
}
