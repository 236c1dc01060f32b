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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixcap/captioner.hpp"
#include "mixcap/eval.hpp"
#include "mixcap/manifest.hpp"
#include "mixcap/preprocess.hpp"

namespace mixcap {

/// Run fn(0..n) across up to `jobs` worker threads. Results must be
/// written to index-aligned slots; the function must be thread-safe.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// generate

struct GenerateConfig {
  std::filesystem::path source_manifest;
  std::filesystem::path out_dir;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  SampleParams params;
  FilterPolicy filter;
  std::string split = "train";
  unsigned jobs = 1;
};

struct GenerateStats {
  std::size_t corpus_size = 0;
  std::size_t rejected_duration = 0;
  std::size_t rejected_class = 0;
  std::size_t records_written = 0;
};

/// Filter the corpus, then sample and execute `count` plans; per-record
/// seeds derive from (seed, index) so output is order-independent. Writes
/// out_dir/manifest.jsonl and out_dir/audio/*.wav.
GenerateStats cmd_generate(const GenerateConfig& config);

// ---------------------------------------------------------------------------
// caption

struct BackendChoice {
  std::string kind = "offline";  // offline | http
  HttpBackendConfig http;
  std::string prompt_override;
};

/// Construct the chosen backend. Exposed so tests can mirror CLI wiring.
std::unique_ptr<CaptionBackend> make_backend(const BackendChoice& choice);

/// Read backend + postprocess settings from a JSON config file.
struct CaptionConfig {
  std::filesystem::path manifest_path;
  BackendChoice backend;
  PostprocessPolicy policy;
  RetryPolicy retry;
  std::size_t batch_size = 20;
  unsigned max_in_flight = 1;
};

CaptionConfig load_caption_config(const std::filesystem::path& config_path);

struct CaptionStats {
  std::size_t captioned = 0;
  std::size_t rejected = 0;
  std::size_t skipped_already_done = 0;
};

/// Caption every record that is not already captioned. The manifest is
/// rewritten after each completed batch chunk, so an interrupted run
/// resumes without re-requesting finished records. Throws BackendError
/// after persisting partial progress.
CaptionStats cmd_caption(const CaptionConfig& config,
                         CaptionBackend* backend_override = nullptr);

// ---------------------------------------------------------------------------
// negatives

struct NegativesConfig {
  std::filesystem::path manifest_path;
  std::optional<std::size_t> count;   // exactly this many
  std::optional<double> fraction;     // else ceil(fraction * eligible)
  std::uint64_t seed = 0;
  BackendChoice backend;
  PostprocessPolicy policy;
  RetryPolicy retry;
  /// Optional override; defaults to the source manifest recorded at
  /// generate time.
  std::optional<std::filesystem::path> source_manifest;
  unsigned jobs = 1;
};

struct NegativesStats {
  std::size_t eligible = 0;
  std::size_t skipped_not_invertible = 0;
  std::size_t created = 0;
};

/// Select eligible records (captioned, not already negatives, at least one
/// invertible transform), execute the reversed plans, caption them, and
/// append linked records.
NegativesStats cmd_negatives(const NegativesConfig& config,
                             CaptionBackend* backend_override = nullptr);

// ---------------------------------------------------------------------------
// eval

struct EvalConfig {
  std::filesystem::path audio_embeddings;
  std::filesystem::path text_embeddings;
  std::optional<std::filesystem::path> flipped_embeddings;
  std::optional<std::filesystem::path> sidecar;   // ids/groups/categories JSON
  std::optional<std::filesystem::path> manifest;  // captions for modifier stats
  std::vector<std::size_t> k_list = {1, 5, 10};
  std::set<std::string> metrics = {"recall"};     // recall | mut | mdt | stats
  std::filesystem::path report_path;
  std::optional<std::filesystem::path> csv_path;
};

/// Compute the requested metric blocks and write the JSON report (and
/// optional CSV). Returns the report document as a string.
std::string cmd_eval(const EvalConfig& config);

// ---------------------------------------------------------------------------
// features

struct FeaturesConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path out_dir;
  bool write_csv = false;
  unsigned jobs = 1;
};

std::size_t cmd_features(const FeaturesConfig& config);

// ---------------------------------------------------------------------------
// validate

struct ValidateResult {
  std::vector<ValidationIssue> issues;
  std::size_t records = 0;
};

ValidateResult cmd_validate(const std::filesystem::path& manifest_path);

}  // namespace mixcap
