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

#include "helpers.hpp"
#include "mixcap/dsp.hpp"
#include "mixcap/errors.hpp"

using namespace mixcap;

TEST_CASE("zero gain is the identity") {
  const AudioClip tone = testutil::make_tone(440.0, 0.5, 16000);
  const AudioClip out = apply_gain(tone, 0.0);
  CHECK(out.samples == tone.samples);
}

TEST_CASE("+1 dB on a constant 0.5 signal") {
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.assign(1000, 0.5f);
  const AudioClip out = apply_gain(clip, 1.0);
  // closed form: 0.5 * 10^(1/20)
  const double expected = 0.5 * std::pow(10.0, 1.0 / 20.0);
  CHECK(expected == doctest::Approx(0.561).epsilon(1e-3));
  for (float s : out.samples) CHECK(s == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("-0.5 dB scales RMS by 10^(-0.5/20)") {
  const AudioClip tone = testutil::make_tone(300.0, 1.0, 16000, 0.4);
  const AudioClip out = apply_gain(tone, -0.5);
  const double ratio = testutil::rms_of(out.samples) / testutil::rms_of(tone.samples);
  CHECK(ratio == doctest::Approx(std::pow(10.0, -0.5 / 20.0)).epsilon(1e-6));
}

TEST_CASE("gains compose additively") {
  const AudioClip noise = testutil::make_noise(0.3, 16000, 42);
  mixcap::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    const AudioClip two_step = apply_gain(apply_gain(noise, a), b);
    const AudioClip one_step = apply_gain(noise, a + b);
    for (std::size_t i = 0; i < noise.size(); ++i)
      CHECK(std::abs(two_step.samples[i] - one_step.samples[i]) <= 1e-6);
  }
}

TEST_CASE("pitch shift identity keeps the spectral peak") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  const AudioClip out = pitch_shift(tone, 0.0);
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0).epsilon(16.0 / 440.0));  // within one bin
}

TEST_CASE("pitch up half an octave lands at 440*sqrt(2)") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  const AudioClip out = pitch_shift(tone, 0.5);
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0 * std::sqrt(2.0)).epsilon(0.03));
  const double len_ratio = static_cast<double>(out.size()) / static_cast<double>(tone.size());
  CHECK(len_ratio == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("pitch down half an octave lands at 440/sqrt(2)") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  const AudioClip out = pitch_shift(tone, -0.5);
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0 / std::sqrt(2.0)).epsilon(0.03));
  const double len_ratio = static_cast<double>(out.size()) / static_cast<double>(tone.size());
  CHECK(len_ratio >= 0.99);
  CHECK(len_ratio <= 1.01);
}

TEST_CASE("pitch shift rejects short clips and bad ranges") {
  const AudioClip tiny = testutil::make_tone(440.0, 0.01, 16000);  // 160 samples
  CHECK_THROWS_AS(pitch_shift(tiny, 0.2), ClipTooShortError);
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  CHECK_THROWS_AS(pitch_shift(tone, 0.6), InvalidArgumentError);
}

TEST_CASE("time stretch identity") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  const AudioClip out = time_stretch(tone, 1.0);
  const double len_ratio = static_cast<double>(out.size()) / static_cast<double>(tone.size());
  CHECK(len_ratio >= 0.99);
  CHECK(len_ratio <= 1.01);
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0).epsilon(16.0 / 440.0));
}

TEST_CASE("rate 0.8 lengthens a 2 s clip to about 2.5 s") {
  const AudioClip tone = testutil::make_tone(440.0, 2.0, 16000);
  const AudioClip out = time_stretch(tone, 0.8);
  // oracle: len / rate
  const double expected = static_cast<double>(tone.size()) / 0.8;
  CHECK(static_cast<double>(out.size()) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("rate 1.2 shortens while preserving pitch") {
  const AudioClip tone = testutil::make_tone(440.0, 2.0, 16000);
  const AudioClip out = time_stretch(tone, 1.2);
  const double expected = static_cast<double>(tone.size()) / 1.2;
  CHECK(static_cast<double>(out.size()) == doctest::Approx(expected).epsilon(0.02));
  const double peak = testutil::dominant_frequency_hz(out.samples, 16000);
  CHECK(peak == doctest::Approx(440.0).epsilon(0.02));
}

TEST_CASE("reciprocal stretches restore duration within 4%") {
  const AudioClip tone = testutil::make_tone(520.0, 1.5, 16000);
  for (double rate : {0.8, 0.9, 1.1, 1.2}) {
    const AudioClip back = phase_vocoder_stretch(time_stretch(tone, rate), 1.0 / rate);
    const double ratio = static_cast<double>(back.size()) / static_cast<double>(tone.size());
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.04));
  }
}

TEST_CASE("time stretch enforces the configured rate range") {
  const AudioClip tone = testutil::make_tone(440.0, 1.0, 16000);
  CHECK_THROWS_AS(time_stretch(tone, 0.5), InvalidArgumentError);
  CHECK_THROWS_AS(time_stretch(tone, 1.3), InvalidArgumentError);
}

TEST_CASE("halve_duration keeps a contiguous half window") {
  const AudioClip noise = testutil::make_noise(1.0, 16000, 9);
  mixcap::Rng rng(5);
  const AudioClip half = halve_duration(noise, rng);
  REQUIRE(half.size() == 8000);

  // output must appear verbatim somewhere in the input
  bool found = false;
  for (std::size_t start = 0; start + half.size() <= noise.size() && !found; ++start) {
    found = std::equal(half.samples.begin(), half.samples.end(),
                       noise.samples.begin() + static_cast<std::ptrdiff_t>(start));
  }
  CHECK(found);
}

TEST_CASE("halve_duration is deterministic under a fixed seed") {
  const AudioClip noise = testutil::make_noise(1.0, 16000, 10);
  mixcap::Rng a(123), b(123);
  CHECK(halve_duration(noise, a).samples == halve_duration(noise, b).samples);
}

TEST_CASE("degenerate one-sample clips are rejected") {
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples = {0.5f};
  mixcap::Rng rng(1);
  CHECK_THROWS_AS(halve_duration(clip, rng), InvalidArgumentError);
}

TEST_CASE("concatenation length is exact: 2 s + 3 s -> 88000 samples") {
  const AudioClip a = testutil::make_tone(300.0, 2.0, 16000);
  const AudioClip b = testutil::make_tone(500.0, 3.0, 16000);
  const AudioClip out = concat_with_silence(a, b);
  CHECK(out.size() == 32000 + 8000 + 48000);
}

TEST_CASE("the 0.5 s gap is exact zeros, clips verbatim") {
  const AudioClip a = testutil::make_noise(0.5, 16000, 1);
  const AudioClip b = testutil::make_noise(0.7, 16000, 2);
  const AudioClip out = concat_with_silence(a, b);
  for (std::size_t k = 0; k < 8000; ++k) CHECK(out.samples[a.size() + k] == 0.0f);
  CHECK(std::equal(a.samples.begin(), a.samples.end(), out.samples.begin()));
  CHECK(std::equal(b.samples.begin(), b.samples.end(),
                   out.samples.begin() + static_cast<std::ptrdiff_t>(a.size() + 8000)));
}

TEST_CASE("silence concatenated with silence is silent") {
  AudioClip a, b;
  a.sample_rate = b.sample_rate = 16000;
  a.samples.assign(1000, 0.0f);
  b.samples.assign(2000, 0.0f);
  const AudioClip out = concat_with_silence(a, b);
  for (float s : out.samples) CHECK(s == 0.0f);
}

TEST_CASE("concatenation requires matching rates") {
  const AudioClip a = testutil::make_tone(300.0, 1.0, 16000);
  const AudioClip b = testutil::make_tone(300.0, 1.0, 8000);
  CHECK_THROWS_AS(concat_with_silence(a, b), RateMismatchError);
}

TEST_CASE("snr 0 with equal-RMS clips adds them unscaled") {
  const AudioClip tone = testutil::make_tone(400.0, 1.0, 16000, 0.3);
  AudioClip shifted = tone;  // same RMS
  const AudioClip out = mix_at_snr(tone, shifted, 0.0, 0);
  for (std::size_t i = 0; i < tone.size(); ++i)
    CHECK(out.samples[i] == doctest::Approx(2.0 * tone.samples[i]).epsilon(1e-6));
}

TEST_CASE("realized SNR matches the request within 0.1 dB") {
  mixcap::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const AudioClip signal = testutil::make_noise(1.0, 16000, 100 + trial, 0.4);
    const AudioClip noise = testutil::make_tone(rng.uniform(100.0, 3000.0), 0.6, 16000,
                                                rng.uniform(0.05, 0.8));
    const double snr_db = rng.uniform(-5.0, 5.0);
    const auto offset = static_cast<std::size_t>(rng.uniform_int(0, 6000));

    const AudioClip out = mix_at_snr(signal, noise, snr_db, offset);

    // oracle: recover the scaled noise from output - signal, re-measure RMS
    const std::size_t overlap_end = std::min(signal.size(), offset + noise.size());
    const std::size_t overlap = overlap_end - offset;
    std::vector<float> noise_part(overlap), signal_part(overlap);
    for (std::size_t i = 0; i < overlap; ++i) {
      signal_part[i] = signal.samples[offset + i];
      noise_part[i] = out.samples[offset + i] - signal.samples[offset + i];
    }
    const double realized =
        20.0 * std::log10(testutil::rms_of(signal_part) / testutil::rms_of(noise_part));
    CHECK(std::abs(realized - snr_db) <= 0.1);
  }
}

TEST_CASE("offset at the very end behaves like gapless concatenation") {
  const AudioClip a = testutil::make_tone(300.0, 1.0, 16000, 0.3);
  const AudioClip b = testutil::make_tone(700.0, 0.5, 16000, 0.3);
  const AudioClip out = mix_at_snr(a, b, 0.0, a.size());
  CHECK(out.size() == a.size() + b.size());
  CHECK(std::equal(a.samples.begin(), a.samples.end(), out.samples.begin()));
  // equal full-clip RMS at snr 0 means g = 1
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(out.samples[a.size() + i] == doctest::Approx(b.samples[i]).epsilon(1e-4));
}

TEST_CASE("silent inputs cannot define an SNR") {
  AudioClip silent;
  silent.sample_rate = 16000;
  silent.samples.assign(8000, 0.0f);
  const AudioClip tone = testutil::make_tone(440.0, 0.5, 16000);
  CHECK_THROWS_AS(mix_at_snr(silent, tone, 0.0, 0), SilentInputError);
  CHECK_THROWS_AS(mix_at_snr(tone, silent, 0.0, 0), SilentInputError);
}

TEST_CASE("mix validates rates, snr range, and offset bounds") {
  const AudioClip a = testutil::make_tone(300.0, 1.0, 16000);
  const AudioClip b8k = testutil::make_tone(300.0, 1.0, 8000);
  CHECK_THROWS_AS(mix_at_snr(a, b8k, 0.0, 0), RateMismatchError);
  const AudioClip b = testutil::make_tone(700.0, 1.0, 16000);
  CHECK_THROWS_AS(mix_at_snr(a, b, 9.0, 0), InvalidArgumentError);
  CHECK_THROWS_AS(mix_at_snr(a, b, 0.0, a.size() + 1), InvalidArgumentError);
}

TEST_CASE("keyword table matches parameter signs") {
  CHECK(keyword_for(TransformKind::Volume, 0.7) == "loud");
  CHECK(keyword_for(TransformKind::Volume, -0.7) == "quiet");
  CHECK(keyword_for(TransformKind::Pitch, 0.3) == "high-pitch");
  CHECK(keyword_for(TransformKind::Pitch, -0.3) == "low-pitch");
  CHECK(keyword_for(TransformKind::Speed, 1.1) == "fast");
  CHECK(keyword_for(TransformKind::Speed, 0.9) == "slow");
  CHECK(keyword_for(TransformKind::Duration, 0.5) == "short");
}

TEST_CASE("keyword antonyms pair up; short and background stay put") {
  CHECK(keyword_antonym("loud") == "quiet");
  CHECK(keyword_antonym("quiet") == "loud");
  CHECK(keyword_antonym("high-pitch") == "low-pitch");
  CHECK(keyword_antonym("fast") == "slow");
  CHECK(keyword_antonym("short") == "short");
  CHECK(keyword_antonym("background") == "background");
}
