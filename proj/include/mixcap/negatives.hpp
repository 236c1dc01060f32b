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

#include <set>
#include <string>
#include <vector>

#include "mixcap/composer.hpp"
#include "mixcap/rng.hpp"

namespace mixcap {

/// Bookkeeping for a positive/negative record pair: same sources,
/// combines and orders, opposite transform parameters.
struct HardNegativePair {
  std::string positive_id;
  std::string negative_id;
  std::set<TransformKind> reversed_kinds;
};

/// True for Volume/Pitch/Speed; Duration has no opposite transform.
bool is_invertible(TransformKind kind);

/// Semantic opposite of a transform: Volume negates the gain, Pitch
/// negates the octaves, Speed takes the reciprocal rate (may exceed 1.2,
/// up to 1.25), Duration is returned unchanged. Keywords swap to their
/// antonyms.
TransformSpec invert_transform(const TransformSpec& t);

/// The same plan with every invertible transform reversed; seed, sources,
/// combines and orders are untouched. Throws NoInvertibleTransformsError
/// when nothing can be reversed.
AugmentationPlan hard_negative_plan(const AugmentationPlan& plan);

/// Transform kinds that hard_negative_plan would reverse.
std::set<TransformKind> invertible_kinds(const AugmentationPlan& plan);

/// Draw c distinct ids uniformly from the eligible pool (minibatch
/// injection bookkeeping). Throws NotEnoughEligibleError when c exceeds
/// the pool size.
std::vector<std::string> select_negative_injections(
    const std::vector<std::string>& eligible_ids, std::size_t c, Rng& rng);

}  // namespace mixcap
