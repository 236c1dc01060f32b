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

#include "mixcap/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mixcap/errors.hpp"
#include "mixcap/features.hpp"
#include "mixcap/negatives.hpp"

namespace mixcap {

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string record_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%06zu", index);
  return buf;
}

std::vector<std::string> flatten_keywords(const std::vector<EventDescriptor>& events) {
  std::vector<std::string> out;
  for (const auto& e : events)
    out.insert(out.end(), e.description.begin(), e.description.end());
  return out;
}

}  // namespace

GenerateStats cmd_generate(const GenerateConfig& config) {
  if (config.count == 0) throw InvalidArgumentError("generate: count must be > 0");

  const auto corpus = load_source_manifest(config.source_manifest.string());
  GenerateStats stats;
  stats.corpus_size = corpus.size();

  std::vector<SourceClipMeta> accepted;
  for (const auto& meta : corpus) {
    const auto verdict = filter_source(meta, config.filter);
    if (!verdict) {
      accepted.push_back(meta);
    } else if (*verdict == RejectReason::Duration) {
      ++stats.rejected_duration;
    } else {
      ++stats.rejected_class;
    }
  }
  if (accepted.size() < 5)
    throw CorpusTooSmallError("generate: only " + std::to_string(accepted.size()) +
                              " clips pass the filter; need at least 5");

  std::filesystem::create_directories(config.out_dir / "audio");
  const FileClipSource source(accepted, config.source_manifest.parent_path());

  Manifest manifest;
  {
    // Record the source manifest relative to out_dir when possible.
    std::error_code ec;
    const auto rel = std::filesystem::proximate(config.source_manifest, config.out_dir, ec);
    manifest.source_manifest = ec ? config.source_manifest.string() : rel.string();
  }
  manifest.records.resize(config.count);

  parallel_for(config.count, config.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, i, "plan"));
    const AugmentationPlan plan = sample_plan(rng, accepted, config.params);
    const ExecutionResult exec = execute_plan(plan, source);

    DatasetRecord& r = manifest.records[i];
    r.id = record_id(i);
    r.split = config.split;
    r.audio_path = "audio/" + r.id + ".wav";
    r.events = exec.descriptors;
    r.keywords = flatten_keywords(exec.descriptors);
    r.plan = plan;
    r.plan_hash = plan_hash(plan);
    save_wav(exec.waveform, config.out_dir / r.audio_path);
  });

  stats.records_written = manifest.records.size();
  save_manifest(manifest, config.out_dir / "manifest.jsonl");
  return stats;
}

std::unique_ptr<CaptionBackend> make_backend(const BackendChoice& choice) {
  if (choice.kind == "offline") return std::make_unique<OfflineTemplateBackend>();
  if (choice.kind == "http") return std::make_unique<HttpChatBackend>(choice.http);
  throw InvalidArgumentError("unknown backend kind: " + choice.kind);
}

CaptionConfig load_caption_config(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config: " + config_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("config parse failure: ") + e.what());
  }

  CaptionConfig cfg;
  cfg.backend.kind = j.value("backend", "offline");
  cfg.backend.prompt_override = j.value("prompt_override", "");
  if (j.contains("http")) {
    const auto& h = j.at("http");
    cfg.backend.http.endpoint = h.value("endpoint", cfg.backend.http.endpoint);
    cfg.backend.http.model = h.value("model", cfg.backend.http.model);
    cfg.backend.http.temperature = h.value("temperature", cfg.backend.http.temperature);
    cfg.backend.http.api_key_env = h.value("api_key_env", cfg.backend.http.api_key_env);
    cfg.backend.http.timeout_s = h.value("timeout_s", cfg.backend.http.timeout_s);
  }
  cfg.policy.min_words = j.value("min_words", cfg.policy.min_words);
  cfg.policy.max_words = j.value("max_words", cfg.policy.max_words);
  cfg.retry.max_attempts = j.value("max_retries", cfg.retry.max_attempts);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
  return cfg;
}

CaptionStats cmd_caption(const CaptionConfig& config, CaptionBackend* backend_override) {
  Manifest manifest = load_manifest(config.manifest_path);

  std::unique_ptr<CaptionBackend> owned;
  CaptionBackend* backend = backend_override;
  if (backend == nullptr) {
    owned = make_backend(config.backend);
    backend = owned.get();
  }

  CaptionStats stats;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    if (manifest.records[i].captioned()) {
      ++stats.skipped_already_done;
    } else {
      pending.push_back(i);
    }
  }

  const std::size_t batch_size = std::max<std::size_t>(1, config.batch_size);
  std::vector<CaptionQuery> batches;
  for (std::size_t start = 0; start < pending.size(); start += batch_size) {
    CaptionQuery q;
    q.batch_id = "b" + std::to_string(batches.size());
    for (std::size_t i = start; i < std::min(start + batch_size, pending.size()); ++i)
      q.scenarios.push_back(manifest.records[pending[i]].events);
    batches.push_back(std::move(q));
  }

  const unsigned in_flight = std::max(1u, config.max_in_flight);
  std::size_t cursor = 0;  // next pending index to apply results to

  for (std::size_t chunk = 0; chunk < batches.size(); chunk += in_flight) {
    const std::size_t chunk_end = std::min(chunk + in_flight, batches.size());
    std::vector<std::vector<std::string>> results(chunk_end - chunk);

    // Failures propagate after the chunk joins; earlier chunks are already
    // persisted, so an interrupted run resumes at this chunk.
    parallel_for(chunk_end - chunk, in_flight, [&](std::size_t b) {
      results[b] = generate_captions(batches[chunk + b], *backend, config.retry,
                                     config.backend.prompt_override);
    });

    for (std::size_t b = 0; b < results.size(); ++b) {
      for (const auto& caption : results[b]) {
        DatasetRecord& r = manifest.records[pending[cursor++]];
        const auto verdict = postprocess_caption(caption, config.policy);
        if (!verdict) {
          r.caption = normalize_caption(caption);
          ++stats.captioned;
        } else {
          r.caption_reject_reason = caption_reject_name(*verdict);
          ++stats.rejected;
        }
      }
    }
    // Persist after every chunk so interrupts resume cheaply.
    save_manifest(manifest, config.manifest_path);
  }

  if (batches.empty()) save_manifest(manifest, config.manifest_path);
  return stats;
}

NegativesStats cmd_negatives(const NegativesConfig& config,
                             CaptionBackend* backend_override) {
  Manifest manifest = load_manifest(config.manifest_path);
  const auto manifest_dir = config.manifest_path.parent_path();

  std::filesystem::path source_path;
  if (config.source_manifest) {
    source_path = *config.source_manifest;
  } else if (manifest.source_manifest) {
    source_path = *manifest.source_manifest;
    if (source_path.is_relative()) source_path = manifest_dir / source_path;
  } else {
    throw InvalidArgumentError(
        "negatives: manifest has no source_manifest; pass one explicitly");
  }
  const auto corpus = load_source_manifest(source_path.string());
  const FileClipSource source(corpus, source_path.parent_path());

  NegativesStats stats;
  std::set<std::string> already_negated;
  for (const auto& r : manifest.records) {
    if (r.hard_negative_of) already_negated.insert(*r.hard_negative_of);
  }

  std::vector<std::string> eligible;   // candidates without a negative yet
  std::size_t eligible_total = 0;      // including already-negated ones
  for (const auto& r : manifest.records) {
    if (r.hard_negative_of) continue;
    if (!r.caption) continue;  // only captioned positives
    if (invertible_kinds(r.plan).empty()) {
      ++stats.skipped_not_invertible;
      continue;
    }
    ++eligible_total;
    if (already_negated.count(r.id) == 0) eligible.push_back(r.id);
  }
  stats.eligible = eligible_total;

  std::size_t want = 0;
  if (config.count) {
    want = *config.count;
  } else if (config.fraction) {
    want = static_cast<std::size_t>(
        std::ceil(*config.fraction * static_cast<double>(eligible_total)));
  } else {
    throw InvalidArgumentError("negatives: need count or fraction");
  }
  // Existing links count toward the target, so re-running the command with
  // the same arguments is a no-op.
  want -= std::min(want, already_negated.size());

  Rng rng(derive_seed(config.seed, 0, "negatives"));
  const auto chosen = select_negative_injections(eligible, want, rng);

  std::unique_ptr<CaptionBackend> owned;
  CaptionBackend* backend = backend_override;
  if (backend == nullptr) {
    owned = make_backend(config.backend);
    backend = owned.get();
  }

  std::vector<DatasetRecord> negatives(chosen.size());
  parallel_for(chosen.size(), config.jobs, [&](std::size_t i) {
    const DatasetRecord* positive = manifest.find(chosen[i]);
    const AugmentationPlan neg_plan = hard_negative_plan(positive->plan);
    const ExecutionResult exec = execute_plan(neg_plan, source);

    DatasetRecord& r = negatives[i];
    r.id = positive->id + "-neg";
    r.split = positive->split;
    r.audio_path = "audio/" + r.id + ".wav";
    r.events = exec.descriptors;
    r.keywords = flatten_keywords(exec.descriptors);
    r.plan = neg_plan;
    r.plan_hash = plan_hash(neg_plan);
    r.hard_negative_of = positive->id;
    for (TransformKind kind : invertible_kinds(positive->plan))
      r.reversed_kinds.push_back(transform_kind_name(kind));
    save_wav(exec.waveform, manifest_dir / r.audio_path);
  });

  // Caption the new records with the same backend machinery.
  for (auto& r : negatives) {
    CaptionQuery q;
    q.batch_id = "neg-" + r.id;
    q.scenarios.push_back(r.events);
    const auto captions = generate_captions(q, *backend, config.retry,
                                            config.backend.prompt_override);
    const auto verdict = postprocess_caption(captions[0], config.policy);
    if (!verdict) {
      r.caption = normalize_caption(captions[0]);
    } else {
      r.caption_reject_reason = caption_reject_name(*verdict);
    }
  }

  for (auto& r : negatives) manifest.records.push_back(std::move(r));
  stats.created = chosen.size();
  save_manifest(manifest, config.manifest_path);
  return stats;
}

namespace {

std::vector<std::string> load_sidecar_categories(const std::filesystem::path& path,
                                                 std::size_t expected_rows) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sidecar: " + path.string());
  nlohmann::json j;
  in >> j;
  std::vector<std::string> categories;
  if (j.contains("categories"))
    categories = j.at("categories").get<std::vector<std::string>>();
  if (j.contains("ids")) {
    const auto ids = j.at("ids").get<std::vector<std::string>>();
    if (ids.size() != expected_rows)
      throw MissingIdsError("sidecar ids count " + std::to_string(ids.size()) +
                            " differs from embedding rows " +
                            std::to_string(expected_rows));
  }
  if (!categories.empty() && categories.size() != expected_rows)
    throw MissingIdsError("sidecar categories count differs from embedding rows");
  return categories;
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < m.cols; ++c) out.at(i, c) = m.at(rows[i], c);
  return out;
}

}  // namespace

std::string cmd_eval(const EvalConfig& config) {
  const Matrix audio = load_matrix(config.audio_embeddings);
  const Matrix text = load_matrix(config.text_embeddings);
  if (audio.rows != text.rows || audio.cols != text.cols)
    throw DimensionMismatchError("eval: audio and text embedding shapes differ");

  std::vector<std::string> categories;
  if (config.sidecar)
    categories = load_sidecar_categories(*config.sidecar, audio.rows);

  nlohmann::ordered_json report;
  report["metrics"] = nlohmann::ordered_json::array();
  auto push = [&report](nlohmann::ordered_json block) {
    report["metrics"].push_back(std::move(block));
  };

  std::vector<std::pair<std::string, std::vector<double>>> csv_rows;

  if (config.metrics.count("recall") || config.metrics.count("mdt")) {
    const Matrix s = similarity_matrix(audio, text);
    for (const char* name : {"recall", "mdt"}) {
      if (!config.metrics.count(name)) continue;
      std::vector<double> values;
      for (std::size_t k : config.k_list) {
        const double v = recall_at_k(s, k);
        values.push_back(v);
        nlohmann::ordered_json block;
        block["metric"] = name;
        block["k"] = k;
        block["value"] = v;
        push(std::move(block));
      }
      csv_rows.emplace_back(name, values);
    }

    // Category-restricted retrieval (per-category recall) when categories
    // are available.
    if (config.metrics.count("recall") && !categories.empty()) {
      std::set<std::string> unique(categories.begin(), categories.end());
      for (const auto& cat : unique) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < categories.size(); ++i)
          if (categories[i] == cat) rows.push_back(i);
        const Matrix sub = similarity_matrix(select_rows(audio, rows), select_rows(text, rows));
        for (std::size_t k : config.k_list) {
          if (k > rows.size()) continue;
          nlohmann::ordered_json block;
          block["metric"] = "recall_by_category";
          block["category"] = cat;
          block["k"] = k;
          block["value"] = recall_at_k(sub, k);
          push(std::move(block));
        }
      }
    }
  }

  if (config.metrics.count("mut")) {
    if (!config.flipped_embeddings)
      throw MissingIdsError("mut requires flipped caption embeddings (--flipped)");
    const Matrix flipped = load_matrix(*config.flipped_embeddings);
    const double all = mut_score(audio, text, flipped);
    nlohmann::ordered_json block;
    block["metric"] = "mut";
    block["category"] = "all";
    block["value"] = all;
    push(std::move(block));
    std::vector<double> values{all};

    if (!categories.empty()) {
      std::set<std::string> unique(categories.begin(), categories.end());
      for (const auto& cat : unique) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < categories.size(); ++i)
          if (categories[i] == cat) rows.push_back(i);
        const double v = mut_score(select_rows(audio, rows), select_rows(text, rows),
                                   select_rows(flipped, rows));
        values.push_back(v);
        nlohmann::ordered_json b;
        b["metric"] = "mut";
        b["category"] = cat;
        b["value"] = v;
        push(std::move(b));
      }
    }
    csv_rows.emplace_back("mut", values);
  }

  if (config.metrics.count("stats")) {
    if (!config.manifest)
      throw MissingIdsError("stats requires a captioned manifest (--manifest)");
    const Manifest m = load_manifest(*config.manifest);
    std::vector<std::string> captions;
    for (const auto& r : m.records)
      if (r.caption) captions.push_back(*r.caption);
    const auto stats = modifier_stats(captions, ModifierLexicon::default_lexicon());
    std::vector<double> values;
    for (const auto& [cat, stat] : stats) {
      nlohmann::ordered_json block;
      block["metric"] = "modifier_stats";
      block["category"] = modifier_category_name(cat);
      block["count"] = stat.count;
      block["value"] = stat.percent;
      push(std::move(block));
      values.push_back(stat.percent);
    }
    csv_rows.emplace_back("modifier_stats", values);
  }

  const std::string text_out = report.dump(2) + "\n";
  {
    std::ofstream out(config.report_path, std::ios::trunc);
    if (!out) throw IoError("cannot write report: " + config.report_path.string());
    out << text_out;
  }
  if (config.csv_path) {
    std::ofstream out(*config.csv_path, std::ios::trunc);
    for (const auto& [name, values] : csv_rows) {
      out << name;
      for (double v : values) out << ',' << v;
      out << '\n';
    }
  }
  return text_out;
}

std::size_t cmd_features(const FeaturesConfig& config) {
  const Manifest manifest = load_manifest(config.manifest_path);
  const auto manifest_dir = config.manifest_path.parent_path();
  std::filesystem::create_directories(config.out_dir);

  parallel_for(manifest.records.size(), config.jobs, [&](std::size_t i) {
    const DatasetRecord& r = manifest.records[i];
    const AudioClip clip = load_wav(manifest_dir / r.audio_path);
    const FeatureMatrix feats = logmel(resample(clip, kPipelineRate));
    save_feature_matrix(feats, config.out_dir / (r.id + ".bin"));
    if (config.write_csv) save_feature_csv(feats, config.out_dir / (r.id + ".csv"));
  });
  return manifest.records.size();
}

ValidateResult cmd_validate(const std::filesystem::path& manifest_path) {
  const Manifest manifest = load_manifest(manifest_path);
  ValidateResult result;
  result.records = manifest.records.size();
  result.issues = validate_manifest(manifest, manifest_path.parent_path());
  return result;
}

}  // namespace mixcap
