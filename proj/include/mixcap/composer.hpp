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

#include <cstdint>
#include <string>
#include <vector>

#include "mixcap/audio.hpp"
#include "mixcap/dsp.hpp"
#include "mixcap/preprocess.hpp"
#include "mixcap/rng.hpp"

namespace mixcap {

inline constexpr double kOutputSeconds = 10.0;

/// Full recipe for one dataset item. Executing a plan is deterministic:
/// all randomness was drawn at sampling time or derives from `seed`.
struct AugmentationPlan {
  std::uint64_t seed = 0;
  std::vector<std::string> source_ids;                    // n in [1, 5]
  std::vector<std::vector<TransformSpec>> transforms;     // index-aligned with sources
  std::vector<CombineSpec> combines;                      // n - 1 junctions
  std::vector<int> orders;                                // n order values

  std::size_t n_clips() const { return source_ids.size(); }
};

/// Per-clip record feeding the caption query: labels, keywords, order.
struct EventDescriptor {
  std::string sound;
  std::vector<std::string> description;
  int order = 0;

  friend bool operator==(const EventDescriptor&, const EventDescriptor&) = default;
};

struct SampleParams {
  double p_transform = 0.3;  // per (clip, kind) Bernoulli
  double p_mix = 0.2;        // per junction Bernoulli
};

/// orders[0] = 0; +1 after a Concatenate junction, +0 after a Mix.
std::vector<int> assign_order(const std::vector<CombineSpec>& combines);

/// Draw a full plan: n ~ U{1..5}, n distinct corpus clips, per-(clip, kind)
/// transforms with probability p_transform, Mix junctions with probability
/// p_mix (SNR ~ U[-5,5], offset uniform over the predicted accumulated
/// length), orders per assign_order. Throws CorpusTooSmallError when the
/// corpus has fewer than 5 clips.
AugmentationPlan sample_plan(Rng& rng, const std::vector<SourceClipMeta>& corpus,
                             const SampleParams& params = {});

/// Source of clip audio + metadata for plan execution.
class ClipSource {
 public:
  virtual ~ClipSource() = default;
  virtual const SourceClipMeta& meta(const std::string& id) const = 0;
  /// 16 kHz mono clip cropped to the [start_s, end_s] labeled segment.
  virtual AudioClip load(const std::string& id) const = 0;
};

/// ClipSource over a source manifest; loads WAV files relative to
/// `base_dir`, resamples to 16 kHz and crops to the labeled segment.
class FileClipSource : public ClipSource {
 public:
  FileClipSource(std::vector<SourceClipMeta> corpus, std::filesystem::path base_dir);
  const SourceClipMeta& meta(const std::string& id) const override;
  AudioClip load(const std::string& id) const override;

 private:
  std::vector<SourceClipMeta> corpus_;
  std::vector<std::size_t> order_;  // ids sorted for lookup
  std::filesystem::path base_dir_;
};

struct ExecutionResult {
  AudioClip waveform;                      // exactly 10 s at 16 kHz
  std::vector<EventDescriptor> descriptors;  // one per source clip
};

/// Run a plan: per-clip transforms in fixed order Volume -> Pitch -> Speed
/// -> Duration, left fold over the junctions, pad/truncate to 10 s.
/// Descriptors carry the transform keywords plus "background" on the noise
/// side of each Mix.
ExecutionResult execute_plan(const AugmentationPlan& plan, const ClipSource& source);

/// Canonical JSON (alphabetically sorted keys) so equal plans serialize
/// byte-identically. from/to round trip is lossless.
std::string plan_to_json(const AugmentationPlan& plan);
AugmentationPlan plan_from_json(const std::string& json_text);

/// FNV-1a hash of the canonical JSON, as 16 hex digits.
std::string plan_hash(const AugmentationPlan& plan);

/// Check the structural invariants (n in [1,5], orders rule, per-kind
/// uniqueness, parameter ranges). Throws InvalidArgumentError on violation.
void validate_plan(const AugmentationPlan& plan);

}  // namespace mixcap
