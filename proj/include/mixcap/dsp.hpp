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

#include <string>
#include <vector>

#include "mixcap/audio.hpp"
#include "mixcap/rng.hpp"

namespace mixcap {

enum class TransformKind { Volume, Pitch, Speed, Duration };

/// One per-clip augmentation: kind, drawn parameter, and the natural
/// language keywords attached to it.
///
/// Parameter ranges: Volume |dB| in [0.5, 1]; Pitch octaves in
/// [-0.5, 0.5]; Speed rate in [0.8, 1.2]; Duration fixed 0.5.
struct TransformSpec {
  TransformKind kind = TransformKind::Volume;
  double parameter = 0.0;
  std::vector<std::string> keywords;

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

enum class CombineKind { Concatenate, Mix };

/// How two consecutive clips are joined.
struct CombineSpec {
  CombineKind kind = CombineKind::Concatenate;
  double snr_db = 0.0;            // Mix only, in [-5, 5]
  std::size_t offset_samples = 0; // Mix only
  double gap_s = 0.5;             // Concatenate only

  friend bool operator==(const CombineSpec&, const CombineSpec&) = default;
};

const char* transform_kind_name(TransformKind kind);
TransformKind transform_kind_from_name(const std::string& name);

/// Keyword for a (kind, parameter) pair: loud/quiet, high-pitch/low-pitch,
/// fast/slow, short. Signs at exactly zero resolve to the positive word.
std::string keyword_for(TransformKind kind, double parameter);

/// Antonym in the keyword table ("loud" -> "quiet", ...). Words without an
/// antonym ("short", "background") are returned unchanged.
std::string keyword_antonym(const std::string& keyword);

/// Build a TransformSpec with keywords derived from (kind, parameter).
TransformSpec make_transform(TransformKind kind, double parameter);

/// Multiply every sample by 10^(gain_db/20). Length unchanged.
AudioClip apply_gain(const AudioClip& clip, double gain_db);

/// Shift pitch by 2^octaves while preserving duration within 1%.
/// Phase-vocoder stretch followed by band-limited resampling.
AudioClip pitch_shift(const AudioClip& clip, double octaves);

/// Change speed by `rate` (duration -> duration/rate) while preserving
/// pitch. Phase vocoder, 1024-point Hann analysis window, hop 256.
/// rate must lie in [0.8, 1.2]; see phase_vocoder_stretch for the
/// unrestricted primitive.
AudioClip time_stretch(const AudioClip& clip, double rate);

/// Unrestricted phase-vocoder stretch (any rate > 0); backs both
/// time_stretch and pitch_shift. Window size must be a power of two.
AudioClip phase_vocoder_stretch(const AudioClip& clip, double rate,
                                std::size_t window = 1024, std::size_t hop = 256);

/// Keep a random contiguous window of floor(len/2) samples.
AudioClip halve_duration(const AudioClip& clip, Rng& rng);

/// c1, 0.5 s of exact zeros, c2. Rates must match.
AudioClip concat_with_silence(const AudioClip& c1, const AudioClip& c2);

/// Which samples define the RMS values entering the SNR equation.
enum class RmsScope { Overlap, FullClips };

/// Add `noise`, scaled to the requested SNR, into `signal` starting at
/// `offset_samples`. Output length = max(len(signal), offset + len(noise)).
/// SNR is defined over the overlap region (or the full clips when the
/// overlap is empty or scope says so). Throws SilentInputError when either
/// RMS is zero.
AudioClip mix_at_snr(const AudioClip& signal, const AudioClip& noise,
                     double snr_db, std::size_t offset_samples,
                     RmsScope scope = RmsScope::Overlap);

double rms(const float* samples, std::size_t count);

}  // namespace mixcap
