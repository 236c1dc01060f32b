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

#include "mixcap/composer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mixcap/errors.hpp"

namespace mixcap {

namespace {

const TransformKind kKindOrder[] = {TransformKind::Volume, TransformKind::Pitch,
                                    TransformKind::Speed, TransformKind::Duration};

/// Predicted post-transform length in samples, from metadata alone.
/// Used only to bound mix offsets at sampling time; execution clamps.
std::size_t predicted_length(const SourceClipMeta& meta,
                             const std::vector<TransformSpec>& transforms) {
  auto len = static_cast<std::size_t>(
      std::llround(meta.duration_s() * kPipelineRate));
  for (const auto& t : transforms) {
    if (t.kind == TransformKind::Speed && t.parameter > 0)
      len = static_cast<std::size_t>(std::llround(static_cast<double>(len) / t.parameter));
    else if (t.kind == TransformKind::Duration)
      len /= 2;
  }
  return std::max<std::size_t>(len, 1);
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out;
}

}  // namespace

std::vector<int> assign_order(const std::vector<CombineSpec>& combines) {
  std::vector<int> orders(combines.size() + 1, 0);
  for (std::size_t i = 0; i < combines.size(); ++i)
    orders[i + 1] = orders[i] + (combines[i].kind == CombineKind::Concatenate ? 1 : 0);
  return orders;
}

AugmentationPlan sample_plan(Rng& rng, const std::vector<SourceClipMeta>& corpus,
                             const SampleParams& params) {
  if (corpus.size() < 5)
    throw CorpusTooSmallError("sample_plan: need at least 5 accepted clips, have " +
                              std::to_string(corpus.size()));

  AugmentationPlan plan;
  plan.seed = rng.next_u64();

  const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
  const auto picks = rng.sample_without_replacement(corpus.size(), n);

  std::vector<std::size_t> lengths;
  for (std::size_t idx : picks) {
    const SourceClipMeta& meta = corpus[idx];
    plan.source_ids.push_back(meta.id);

    std::vector<TransformSpec> clip_transforms;
    for (TransformKind kind : kKindOrder) {
      if (!rng.bernoulli(params.p_transform)) continue;
      double parameter = 0.0;
      switch (kind) {
        case TransformKind::Volume:
          parameter = rng.sign() * rng.uniform(0.5, 1.0);
          break;
        case TransformKind::Pitch:
          parameter = rng.uniform(-0.5, 0.5);
          break;
        case TransformKind::Speed:
          parameter = rng.uniform(0.8, 1.2);
          break;
        case TransformKind::Duration:
          parameter = 0.5;
          break;
      }
      clip_transforms.push_back(make_transform(kind, parameter));
    }
    lengths.push_back(predicted_length(meta, clip_transforms));
    plan.transforms.push_back(std::move(clip_transforms));
  }

  std::size_t acc_len = lengths.empty() ? 0 : lengths[0];
  for (std::size_t i = 1; i < n; ++i) {
    CombineSpec combine;
    if (rng.bernoulli(params.p_mix)) {
      combine.kind = CombineKind::Mix;
      combine.snr_db = rng.uniform(-5.0, 5.0);
      combine.offset_samples = static_cast<std::size_t>(
          rng.uniform_int(0, std::max<std::int64_t>(0, static_cast<std::int64_t>(acc_len) - 1)));
      acc_len = std::max(acc_len, combine.offset_samples + lengths[i]);
    } else {
      combine.kind = CombineKind::Concatenate;
      acc_len += static_cast<std::size_t>(kPipelineRate / 2) + lengths[i];
    }
    plan.combines.push_back(combine);
  }

  plan.orders = assign_order(plan.combines);
  return plan;
}

FileClipSource::FileClipSource(std::vector<SourceClipMeta> corpus,
                               std::filesystem::path base_dir)
    : corpus_(std::move(corpus)), base_dir_(std::move(base_dir)) {
  order_.resize(corpus_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  std::sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    return corpus_[a].id < corpus_[b].id;
  });
}

const SourceClipMeta& FileClipSource::meta(const std::string& id) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), id,
                             [this](std::size_t i, const std::string& key) {
                               return corpus_[i].id < key;
                             });
  if (it == order_.end() || corpus_[*it].id != id)
    throw MissingSourceError("unknown source clip id: " + id);
  return corpus_[*it];
}

AudioClip FileClipSource::load(const std::string& id) const {
  const SourceClipMeta& m = meta(id);
  std::filesystem::path p = m.audio_path;
  if (p.is_relative()) p = base_dir_ / p;
  AudioClip clip = resample(load_wav(p), kPipelineRate);

  const auto begin = std::min<std::size_t>(
      clip.size(), static_cast<std::size_t>(std::llround(m.start_s * kPipelineRate)));
  const auto end = std::min<std::size_t>(
      clip.size(), static_cast<std::size_t>(std::llround(m.end_s * kPipelineRate)));
  if (end > begin) {
    std::vector<float> cropped(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                               clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
    clip.samples = std::move(cropped);
  }
  return clip;
}

ExecutionResult execute_plan(const AugmentationPlan& plan, const ClipSource& source) {
  validate_plan(plan);
  const std::size_t n = plan.n_clips();

  ExecutionResult result;
  std::vector<AudioClip> clips(n);
  for (std::size_t i = 0; i < n; ++i) {
    AudioClip clip = source.load(plan.source_ids[i]);

    EventDescriptor desc;
    desc.sound = join_labels(source.meta(plan.source_ids[i]).labels);
    desc.order = plan.orders[i];
    if (i > 0 && plan.combines[i - 1].kind == CombineKind::Mix)
      desc.description.push_back("background");

    // Fixed application order regardless of plan file order.
    for (TransformKind kind : kKindOrder) {
      const auto it = std::find_if(
          plan.transforms[i].begin(), plan.transforms[i].end(),
          [kind](const TransformSpec& t) { return t.kind == kind; });
      if (it == plan.transforms[i].end()) continue;
      switch (kind) {
        case TransformKind::Volume:
          clip = apply_gain(clip, it->parameter);
          break;
        case TransformKind::Pitch:
          clip = pitch_shift(clip, it->parameter);
          break;
        case TransformKind::Speed:
          // Unrestricted primitive: inverted plans may carry rates up to 1.25.
          clip = phase_vocoder_stretch(clip, it->parameter);
          break;
        case TransformKind::Duration: {
          Rng window_rng(derive_seed(plan.seed, i, "duration-window"));
          clip = halve_duration(clip, window_rng);
          break;
        }
      }
      desc.description.insert(desc.description.end(), it->keywords.begin(),
                              it->keywords.end());
    }
    clips[i] = std::move(clip);
    result.descriptors.push_back(std::move(desc));
  }

  AudioClip acc = std::move(clips[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const CombineSpec& combine = plan.combines[i - 1];
    if (combine.kind == CombineKind::Concatenate) {
      acc = concat_with_silence(acc, clips[i]);
    } else {
      const std::size_t offset = std::min(combine.offset_samples, acc.size());
      try {
        acc = mix_at_snr(acc, clips[i], combine.snr_db, offset, RmsScope::Overlap);
      } catch (const SilentInputError&) {
        // Overlap landed in a silent region; fall back to full-clip RMS.
        acc = mix_at_snr(acc, clips[i], combine.snr_db, offset, RmsScope::FullClips);
      }
    }
  }

  result.waveform = pad_or_truncate(acc, kOutputSeconds);
  return result;
}

namespace {

nlohmann::json transform_to_json(const TransformSpec& t) {
  nlohmann::json j;
  j["kind"] = transform_kind_name(t.kind);
  j["parameter"] = t.parameter;
  j["keywords"] = t.keywords;
  return j;
}

TransformSpec transform_from_json(const nlohmann::json& j) {
  TransformSpec t;
  t.kind = transform_kind_from_name(j.at("kind").get<std::string>());
  t.parameter = j.at("parameter").get<double>();
  t.keywords = j.at("keywords").get<std::vector<std::string>>();
  return t;
}

nlohmann::json combine_to_json(const CombineSpec& c) {
  nlohmann::json j;
  if (c.kind == CombineKind::Concatenate) {
    j["kind"] = "concat";
    j["gap_s"] = c.gap_s;
  } else {
    j["kind"] = "mix";
    j["snr_db"] = c.snr_db;
    j["offset_samples"] = c.offset_samples;
  }
  return j;
}

CombineSpec combine_from_json(const nlohmann::json& j) {
  CombineSpec c;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "concat") {
    c.kind = CombineKind::Concatenate;
    c.gap_s = j.at("gap_s").get<double>();
  } else if (kind == "mix") {
    c.kind = CombineKind::Mix;
    c.snr_db = j.at("snr_db").get<double>();
    c.offset_samples = j.at("offset_samples").get<std::size_t>();
  } else {
    throw InvalidArgumentError("unknown combine kind: " + kind);
  }
  return c;
}

}  // namespace

std::string plan_to_json(const AugmentationPlan& plan) {
  // nlohmann::json objects are alphabetically ordered: canonical output.
  nlohmann::json j;
  j["seed"] = plan.seed;
  j["source_ids"] = plan.source_ids;
  j["transforms"] = nlohmann::json::array();
  for (const auto& clip_transforms : plan.transforms) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : clip_transforms) arr.push_back(transform_to_json(t));
    j["transforms"].push_back(std::move(arr));
  }
  j["combines"] = nlohmann::json::array();
  for (const auto& c : plan.combines) j["combines"].push_back(combine_to_json(c));
  j["orders"] = plan.orders;
  return j.dump();
}

AugmentationPlan plan_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("plan JSON parse failure: ") + e.what());
  }
  AugmentationPlan plan;
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.source_ids = j.at("source_ids").get<std::vector<std::string>>();
  for (const auto& arr : j.at("transforms")) {
    std::vector<TransformSpec> ts;
    for (const auto& t : arr) ts.push_back(transform_from_json(t));
    plan.transforms.push_back(std::move(ts));
  }
  for (const auto& c : j.at("combines")) plan.combines.push_back(combine_from_json(c));
  plan.orders = j.at("orders").get<std::vector<int>>();
  return plan;
}

std::string plan_hash(const AugmentationPlan& plan) {
  const std::uint64_t h = fnv1a64(plan_to_json(plan));
  std::ostringstream os;
  os << std::hex << std::nouppercase;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

void validate_plan(const AugmentationPlan& plan) {
  const std::size_t n = plan.n_clips();
  if (n < 1 || n > 5)
    throw InvalidArgumentError("plan: n must be in [1, 5]");
  if (plan.transforms.size() != n)
    throw InvalidArgumentError("plan: transforms not index-aligned with sources");
  if (plan.combines.size() != n - 1)
    throw InvalidArgumentError("plan: need n-1 combines");
  if (plan.orders != assign_order(plan.combines))
    throw InvalidArgumentError("plan: orders inconsistent with combines");

  for (const auto& clip_transforms : plan.transforms) {
    bool seen[4] = {false, false, false, false};
    for (const auto& t : clip_transforms) {
      const int k = static_cast<int>(t.kind);
      if (seen[k])
        throw InvalidArgumentError("plan: duplicate transform kind on one clip");
      seen[k] = true;
      switch (t.kind) {
        case TransformKind::Volume:
          if (std::abs(t.parameter) < 0.5 || std::abs(t.parameter) > 1.0)
            throw InvalidArgumentError("plan: volume |dB| must be in [0.5, 1]");
          break;
        case TransformKind::Pitch:
          if (t.parameter < -0.5 || t.parameter > 0.5)
            throw InvalidArgumentError("plan: pitch octaves must be in [-0.5, 0.5]");
          break;
        case TransformKind::Speed:
          // Reciprocals from hard-negative inversion may reach 1.25.
          if (t.parameter < 0.8 || t.parameter > 1.25)
            throw InvalidArgumentError("plan: speed rate must be in [0.8, 1.25]");
          break;
        case TransformKind::Duration:
          if (t.parameter != 0.5)
            throw InvalidArgumentError("plan: duration parameter must be 0.5");
          break;
      }
      if (t.keywords.empty())
        throw InvalidArgumentError("plan: transform keywords must be nonempty");
      const std::string canonical = keyword_for(t.kind, t.parameter);
      if (std::find(t.keywords.begin(), t.keywords.end(), canonical) ==
          t.keywords.end())
        throw InvalidArgumentError("plan: keywords inconsistent with parameter sign (" +
                                   canonical + " missing)");
    }
  }
  for (const auto& c : plan.combines) {
    if (c.kind == CombineKind::Mix && (c.snr_db < -5.0 || c.snr_db > 5.0))
      throw InvalidArgumentError("plan: mix snr_db must be in [-5, 5]");
    if (c.kind == CombineKind::Concatenate && c.gap_s != 0.5)
      throw InvalidArgumentError("plan: concatenate gap_s must be 0.5");
  }
}

}  // namespace mixcap
