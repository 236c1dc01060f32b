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

#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mixcap/errors.hpp"
#include "mixcap/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

unsigned default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixcap: augmented audio-caption dataset generation and evaluation"};
  app.require_subcommand(1);

  // --- generate ------------------------------------------------------------
  mixcap::GenerateConfig gen;
  gen.jobs = default_jobs();
  std::vector<std::string> gen_excluded;
  auto* cmd_gen = app.add_subcommand("generate", "Sample and render augmented clips");
  cmd_gen->add_option("--source", gen.source_manifest, "Source corpus manifest (JSONL)")
      ->required();
  cmd_gen->add_option("--out", gen.out_dir, "Output dataset directory")->required();
  cmd_gen->add_option("--count", gen.count, "Number of records to generate")->required();
  cmd_gen->add_option("--seed", gen.seed, "Root RNG seed")->default_val(0);
  cmd_gen->add_option("--p-t", gen.params.p_transform, "Per-(clip, kind) transform probability")
      ->default_val(0.3);
  cmd_gen->add_option("--p-c", gen.params.p_mix, "Per-junction mix probability")
      ->default_val(0.2);
  cmd_gen->add_option("--min-duration", gen.filter.min_duration_s,
                      "Minimum source clip duration in seconds")
      ->default_val(2.0);
  cmd_gen->add_option("--exclude-label", gen_excluded,
                      "Additional excluded class label (repeatable)");
  cmd_gen->add_option("--split", gen.split, "Split tag for the records")->default_val("train");
  cmd_gen->add_option("--jobs", gen.jobs, "Worker threads");

  // --- caption ---------------------------------------------------------------
  mixcap::CaptionConfig cap;
  std::string cap_backend = "offline";
  std::string cap_config_path;
  auto* cmd_cap = app.add_subcommand("caption", "Caption records via an LLM backend");
  cmd_cap->add_option("--manifest", cap.manifest_path, "Dataset manifest")->required();
  cmd_cap->add_option("--backend", cap_backend, "Backend: offline or http")
      ->check(CLI::IsMember({"offline", "http"}));
  cmd_cap->add_option("--config", cap_config_path, "JSON config file");
  cmd_cap->add_option("--min-words", cap.policy.min_words, "Caption word-count lower bound");
  cmd_cap->add_option("--max-words", cap.policy.max_words, "Caption word-count upper bound");
  cmd_cap->add_option("--batch-size", cap.batch_size, "Scenarios per backend request");

  // --- negatives -------------------------------------------------------------
  mixcap::NegativesConfig neg;
  neg.jobs = default_jobs();
  std::size_t neg_count = 0;
  double neg_fraction = 0.0;
  std::string neg_backend = "offline";
  std::string neg_source;
  auto* cmd_neg = app.add_subcommand("negatives", "Append hard-negative records");
  cmd_neg->add_option("--manifest", neg.manifest_path, "Dataset manifest")->required();
  auto* opt_count = cmd_neg->add_option("--count", neg_count, "How many negatives");
  auto* opt_frac =
      cmd_neg->add_option("--fraction", neg_fraction, "Fraction of eligible records");
  opt_count->excludes(opt_frac);
  cmd_neg->add_option("--seed", neg.seed, "RNG seed for selection")->default_val(0);
  cmd_neg->add_option("--backend", neg_backend, "Backend: offline or http")
      ->check(CLI::IsMember({"offline", "http"}));
  cmd_neg->add_option("--source", neg_source,
                      "Source corpus manifest override (defaults to the one recorded "
                      "at generate time)");
  cmd_neg->add_option("--jobs", neg.jobs, "Worker threads");

  // --- eval --------------------------------------------------------------------
  mixcap::EvalConfig ev;
  std::string ev_flipped, ev_sidecar, ev_manifest, ev_csv;
  std::vector<std::size_t> ev_k = {1, 5, 10};
  std::vector<std::string> ev_metrics = {"recall"};
  auto* cmd_ev = app.add_subcommand("eval", "Embedding-level retrieval and modifier metrics");
  cmd_ev->add_option("--audio", ev.audio_embeddings, "Audio embedding matrix")->required();
  cmd_ev->add_option("--text", ev.text_embeddings, "Text embedding matrix")->required();
  cmd_ev->add_option("--flipped", ev_flipped, "Flipped-caption embedding matrix");
  cmd_ev->add_option("--sidecar", ev_sidecar, "Row ids/categories sidecar JSON");
  cmd_ev->add_option("--manifest", ev_manifest, "Captioned manifest for modifier stats");
  cmd_ev->add_option("--k", ev_k, "Recall cutoffs")->delimiter(',');
  cmd_ev->add_option("--metrics", ev_metrics, "Metrics: recall,mut,mdt,stats")
      ->delimiter(',');
  cmd_ev->add_option("--out", ev.report_path, "Report JSON path")->required();
  cmd_ev->add_option("--csv", ev_csv, "Optional CSV export");

  // --- features ------------------------------------------------------------------
  mixcap::FeaturesConfig feat;
  feat.jobs = default_jobs();
  auto* cmd_feat = app.add_subcommand("features", "Export log-mel features per record");
  cmd_feat->add_option("--manifest", feat.manifest_path, "Dataset manifest")->required();
  cmd_feat->add_option("--out", feat.out_dir, "Feature output directory")->required();
  cmd_feat->add_flag("--csv", feat.write_csv, "Also write debug CSVs");
  cmd_feat->add_option("--jobs", feat.jobs, "Worker threads");

  // --- validate ---------------------------------------------------------------------
  std::string val_manifest;
  auto* cmd_val = app.add_subcommand("validate", "Check manifest integrity");
  cmd_val->add_option("--manifest", val_manifest, "Dataset manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed()) {
      for (const auto& label : gen_excluded) gen.filter.excluded_labels.insert(label);
      const auto stats = mixcap::cmd_generate(gen);
      std::printf("corpus: %zu clips (%zu rejected: %zu duration, %zu class)\n",
                  stats.corpus_size, stats.rejected_duration + stats.rejected_class,
                  stats.rejected_duration, stats.rejected_class);
      std::printf("wrote %zu records to %s\n", stats.records_written,
                  (gen.out_dir / "manifest.jsonl").c_str());
    } else if (cmd_cap->parsed()) {
      mixcap::CaptionConfig cfg = cap;
      if (!cap_config_path.empty()) {
        cfg = mixcap::load_caption_config(cap_config_path);
        cfg.manifest_path = cap.manifest_path;
        // Explicit flags win over the config file.
        if (cmd_cap->count("--min-words")) cfg.policy.min_words = cap.policy.min_words;
        if (cmd_cap->count("--max-words")) cfg.policy.max_words = cap.policy.max_words;
        if (cmd_cap->count("--batch-size")) cfg.batch_size = cap.batch_size;
      }
      if (cmd_cap->count("--backend")) cfg.backend.kind = cap_backend;
      const auto stats = mixcap::cmd_caption(cfg);
      std::printf("captioned %zu, rejected %zu, already done %zu\n", stats.captioned,
                  stats.rejected, stats.skipped_already_done);
    } else if (cmd_neg->parsed()) {
      if (*opt_count)
        neg.count = neg_count;
      else if (*opt_frac)
        neg.fraction = neg_fraction;
      else {
        std::fprintf(stderr, "negatives: need --count or --fraction\n");
        return kExitUsage;
      }
      neg.backend.kind = neg_backend;
      if (!neg_source.empty()) neg.source_manifest = neg_source;
      const auto stats = mixcap::cmd_negatives(neg);
      std::printf("eligible %zu, created %zu, skipped (no invertible transform) %zu\n",
                  stats.eligible, stats.created, stats.skipped_not_invertible);
    } else if (cmd_ev->parsed()) {
      if (!ev_flipped.empty()) ev.flipped_embeddings = ev_flipped;
      if (!ev_sidecar.empty()) ev.sidecar = ev_sidecar;
      if (!ev_manifest.empty()) ev.manifest = ev_manifest;
      if (!ev_csv.empty()) ev.csv_path = ev_csv;
      ev.k_list = ev_k;
      ev.metrics = std::set<std::string>(ev_metrics.begin(), ev_metrics.end());
      std::cout << mixcap::cmd_eval(ev);
    } else if (cmd_feat->parsed()) {
      const auto n = mixcap::cmd_features(feat);
      std::printf("wrote features for %zu records\n", n);
    } else if (cmd_val->parsed()) {
      const auto result = mixcap::cmd_validate(val_manifest);
      if (result.issues.empty()) {
        std::printf("ok: %zu records, 0 integrity errors\n", result.records);
      } else {
        for (const auto& issue : result.issues)
          std::fprintf(stderr, "%s: %s\n", issue.record_id.c_str(), issue.message.c_str());
        std::fprintf(stderr, "%zu integrity errors in %zu records\n", result.issues.size(),
                     result.records);
        return kExitData;
      }
    }
  } catch (const mixcap::BackendError& e) {
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return kExitBackend;
  } catch (const mixcap::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitOk;
}
