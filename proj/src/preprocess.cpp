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

#include "mixcap/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "mixcap/errors.hpp"

namespace mixcap {

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::Duration: return "duration";
    case RejectReason::Class: return "class";
  }
  return "unknown";
}

std::string fold_label(const std::string& label) {
  std::size_t b = 0, e = label.size();
  while (b < e && std::isspace(static_cast<unsigned char>(label[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(label[e - 1]))) --e;
  std::string out = label.substr(b, e - b);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<RejectReason> filter_source(const SourceClipMeta& meta,
                                          const FilterPolicy& policy) {
  if (meta.duration_s() < policy.min_duration_s) return RejectReason::Duration;
  for (const auto& label : meta.labels) {
    if (policy.excluded_labels.count(fold_label(label)) > 0)
      return RejectReason::Class;
  }
  return std::nullopt;
}

std::vector<SourceClipMeta> filter_corpus(const std::vector<SourceClipMeta>& corpus,
                                          const FilterPolicy& policy) {
  std::vector<SourceClipMeta> accepted;
  accepted.reserve(corpus.size());
  for (const auto& meta : corpus) {
    if (!filter_source(meta, policy)) accepted.push_back(meta);
  }
  return accepted;
}

std::vector<SourceClipMeta> load_source_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open source manifest: " + path);

  std::vector<SourceClipMeta> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgumentError("source manifest line " + std::to_string(line_no) +
                                 ": " + e.what());
    }
    SourceClipMeta meta;
    meta.id = j.at("id").get<std::string>();
    meta.audio_path = j.at("audio_path").get<std::string>();
    meta.labels = j.at("labels").get<std::vector<std::string>>();
    meta.start_s = j.at("start_s").get<double>();
    meta.end_s = j.at("end_s").get<double>();
    if (meta.labels.empty())
      throw InvalidArgumentError("source manifest line " + std::to_string(line_no) +
                                 ": labels must be nonempty");
    if (!(meta.end_s > meta.start_s) || meta.start_s < 0)
      throw InvalidArgumentError("source manifest line " + std::to_string(line_no) +
                                 ": need end_s > start_s >= 0");
    out.push_back(std::move(meta));
  }
  return out;
}

}  // namespace mixcap
