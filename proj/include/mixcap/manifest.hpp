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
#include <string>
#include <vector>

#include "mixcap/captioner.hpp"
#include "mixcap/composer.hpp"

namespace mixcap {

inline constexpr int kManifestSchemaVersion = 1;

/// One dataset item: audio file, caption, the plan that produced it, and
/// the hard-negative link when applicable. audio_path is relative to the
/// manifest directory.
struct DatasetRecord {
  std::string id;
  std::string split = "train";
  std::string audio_path;
  std::optional<std::string> caption;
  std::optional<std::string> caption_reject_reason;
  std::vector<std::string> keywords;        // flat keyword list
  std::vector<EventDescriptor> events;      // caption query inputs
  AugmentationPlan plan;
  std::string plan_hash;
  std::optional<std::string> hard_negative_of;
  std::vector<std::string> reversed_kinds;  // set when this is a negative

  bool captioned() const { return caption.has_value() || caption_reject_reason.has_value(); }
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  /// Source corpus this dataset was generated from, relative to the
  /// manifest directory; negatives re-execute plans against it.
  std::optional<std::string> source_manifest;
  std::vector<DatasetRecord> records;

  const DatasetRecord* find(const std::string& id) const;
};

/// JSONL: schema-versioned header line, then one record per line.
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

std::string record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const std::string& line);

struct ValidationIssue {
  std::string record_id;
  std::string message;
};

/// Referential and structural integrity: unique ids, existing audio files,
/// resolvable hard_negative_of links, plan invariants, plan hash match.
std::vector<ValidationIssue> validate_manifest(const Manifest& manifest,
                                               const std::filesystem::path& manifest_dir);

}  // namespace mixcap
