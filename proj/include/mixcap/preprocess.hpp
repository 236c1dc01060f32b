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

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mixcap {

/// One labeled source clip with strong (per-event) timestamps.
struct SourceClipMeta {
  std::string id;
  std::string audio_path;
  std::vector<std::string> labels;
  double start_s = 0.0;
  double end_s = 0.0;

  double duration_s() const { return end_s - start_s; }
};

struct FilterPolicy {
  double min_duration_s = 2.0;
  std::set<std::string> excluded_labels = {"background/environment", "unknown"};
};

enum class RejectReason { Duration, Class };

const char* reject_reason_name(RejectReason reason);

/// nullopt = accept. Duration rejection when end-start < min_duration_s;
/// class rejection when any label (case-folded, trimmed) is excluded.
std::optional<RejectReason> filter_source(const SourceClipMeta& meta,
                                          const FilterPolicy& policy);

/// Accepted subset of a corpus, original order preserved.
std::vector<SourceClipMeta> filter_corpus(const std::vector<SourceClipMeta>& corpus,
                                          const FilterPolicy& policy);

/// Parse a JSONL source manifest (one SourceClipMeta per line, UTF-8).
/// Relative audio paths are kept as-is; callers resolve against the
/// manifest directory.
std::vector<SourceClipMeta> load_source_manifest(const std::string& path);

/// Lowercased copy with ASCII whitespace trimmed from both ends.
std::string fold_label(const std::string& label);

}  // namespace mixcap
