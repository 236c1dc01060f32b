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

#include "mixcap/negatives.hpp"

#include <algorithm>

#include "mixcap/errors.hpp"

namespace mixcap {

bool is_invertible(TransformKind kind) { return kind != TransformKind::Duration; }

TransformSpec invert_transform(const TransformSpec& t) {
  TransformSpec out = t;
  switch (t.kind) {
    case TransformKind::Volume:
    case TransformKind::Pitch:
      out.parameter = -t.parameter;
      break;
    case TransformKind::Speed:
      out.parameter = 1.0 / t.parameter;
      break;
    case TransformKind::Duration:
      return out;  // no opposite exists; unchanged
  }
  for (auto& kw : out.keywords) kw = keyword_antonym(kw);
  return out;
}

std::set<TransformKind> invertible_kinds(const AugmentationPlan& plan) {
  std::set<TransformKind> kinds;
  for (const auto& clip_transforms : plan.transforms) {
    for (const auto& t : clip_transforms) {
      if (is_invertible(t.kind)) kinds.insert(t.kind);
    }
  }
  return kinds;
}

AugmentationPlan hard_negative_plan(const AugmentationPlan& plan) {
  if (invertible_kinds(plan).empty())
    throw NoInvertibleTransformsError(
        "plan has no invertible transforms; no meaningful hard negative");

  AugmentationPlan out = plan;
  for (auto& clip_transforms : out.transforms) {
    for (auto& t : clip_transforms) {
      if (is_invertible(t.kind)) t = invert_transform(t);
    }
  }
  return out;
}

std::vector<std::string> select_negative_injections(
    const std::vector<std::string>& eligible_ids, std::size_t c, Rng& rng) {
  if (c > eligible_ids.size())
    throw NotEnoughEligibleError("requested " + std::to_string(c) +
                                 " injections from " +
                                 std::to_string(eligible_ids.size()) + " eligible");
  if (c == 0) return {};
  const auto picks = rng.sample_without_replacement(eligible_ids.size(), c);
  std::vector<std::string> out;
  out.reserve(c);
  for (std::size_t idx : picks) out.push_back(eligible_ids[idx]);
  return out;
}

}  // namespace mixcap
