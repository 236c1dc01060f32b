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

#include "mixcap/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mixcap/errors.hpp"

namespace mixcap {

const DatasetRecord* Manifest::find(const std::string& id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string record_to_json(const DatasetRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["split"] = record.split;
  j["audio_path"] = record.audio_path;
  if (record.caption) j["caption"] = *record.caption;
  if (record.caption_reject_reason)
    j["caption_reject_reason"] = *record.caption_reject_reason;
  j["keywords"] = record.keywords;
  j["events"] = nlohmann::ordered_json::parse(build_query(record.events));
  j["plan_hash"] = record.plan_hash;
  j["plan"] = nlohmann::ordered_json::parse(plan_to_json(record.plan));
  if (record.hard_negative_of) j["hard_negative_of"] = *record.hard_negative_of;
  if (!record.reversed_kinds.empty()) j["reversed_kinds"] = record.reversed_kinds;
  return j.dump();
}

DatasetRecord record_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("manifest record parse failure: ") + e.what());
  }
  DatasetRecord r;
  r.id = j.at("id").get<std::string>();
  r.split = j.value("split", "train");
  r.audio_path = j.at("audio_path").get<std::string>();
  if (j.contains("caption")) r.caption = j.at("caption").get<std::string>();
  if (j.contains("caption_reject_reason"))
    r.caption_reject_reason = j.at("caption_reject_reason").get<std::string>();
  r.keywords = j.value("keywords", std::vector<std::string>{});
  if (j.contains("events")) r.events = parse_query(j.at("events").dump());
  r.plan_hash = j.value("plan_hash", "");
  r.plan = plan_from_json(j.at("plan").dump());
  if (j.contains("hard_negative_of"))
    r.hard_negative_of = j.at("hard_negative_of").get<std::string>();
  r.reversed_kinds = j.value("reversed_kinds", std::vector<std::string>{});
  return r;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  // Write-then-rename so interrupted runs never leave a half manifest.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    nlohmann::ordered_json header;
    header["schema_version"] = manifest.schema_version;
    header["kind"] = "mixcap/dataset-manifest";
    if (manifest.source_manifest) header["source_manifest"] = *manifest.source_manifest;
    out << header.dump() << "\n";
    for (const auto& r : manifest.records) out << record_to_json(r) << "\n";
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  Manifest m;
  std::string line;
  if (!std::getline(in, line))
    throw InvalidArgumentError("manifest is empty: " + path.string());
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("manifest header parse failure: ") + e.what());
  }
  if (!header.contains("schema_version"))
    throw InvalidArgumentError("manifest header missing schema_version");
  m.schema_version = header.at("schema_version").get<int>();
  if (m.schema_version != kManifestSchemaVersion)
    throw InvalidArgumentError("unsupported manifest schema version " +
                               std::to_string(m.schema_version));
  if (header.contains("source_manifest"))
    m.source_manifest = header.at("source_manifest").get<std::string>();

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    m.records.push_back(record_from_json(line));
  }
  return m;
}

std::vector<ValidationIssue> validate_manifest(const Manifest& manifest,
                                               const std::filesystem::path& manifest_dir) {
  std::vector<ValidationIssue> issues;
  std::set<std::string> ids;
  for (const auto& r : manifest.records) {
    if (!ids.insert(r.id).second)
      issues.push_back({r.id, "duplicate record id"});
  }
  for (const auto& r : manifest.records) {
    if (!std::filesystem::exists(manifest_dir / r.audio_path))
      issues.push_back({r.id, "missing audio file: " + r.audio_path});
    if (r.hard_negative_of && ids.count(*r.hard_negative_of) == 0)
      issues.push_back({r.id, "dangling hard_negative_of link: " + *r.hard_negative_of});
    try {
      validate_plan(r.plan);
    } catch (const Error& e) {
      issues.push_back({r.id, std::string("invalid plan: ") + e.what()});
    }
    if (!r.plan_hash.empty() && r.plan_hash != plan_hash(r.plan))
      issues.push_back({r.id, "plan hash mismatch"});
    if (r.events.size() != r.plan.n_clips())
      issues.push_back({r.id, "event count differs from plan clip count"});
  }
  return issues;
}

}  // namespace mixcap
