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

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "mixcap/errors.hpp"
#include "mixcap/preprocess.hpp"

using namespace mixcap;

namespace {

SourceClipMeta meta_of(std::string id, double duration, std::vector<std::string> labels) {
  SourceClipMeta m;
  m.id = std::move(id);
  m.audio_path = "x.wav";
  m.labels = std::move(labels);
  m.start_s = 1.0;
  m.end_s = 1.0 + duration;
  return m;
}

}  // namespace

TEST_CASE("short clips are rejected for duration") {
  const FilterPolicy policy;
  CHECK(filter_source(meta_of("a", 1.5, {"dog barking"}), policy) == RejectReason::Duration);
}

TEST_CASE("excluded labels are rejected for class") {
  const FilterPolicy policy;
  CHECK(filter_source(meta_of("a", 4.0, {"unknown"}), policy) == RejectReason::Class);
  // Case folding and trimming apply before matching.
  CHECK(filter_source(meta_of("b", 4.0, {"  Background/Environment "}), policy) ==
        RejectReason::Class);
  // Any excluded label rejects, even alongside good ones.
  CHECK(filter_source(meta_of("c", 4.0, {"dog barking", "unknown"}), policy) ==
        RejectReason::Class);
}

TEST_CASE("clean clips pass both filters") {
  const FilterPolicy policy;
  CHECK(!filter_source(meta_of("a", 4.0, {"dog barking"}), policy));
}

TEST_CASE("duration filter beats class filter only by evaluation order, not outcome") {
  // A clip failing both is still rejected; the reason is duration first.
  const FilterPolicy policy;
  CHECK(filter_source(meta_of("a", 0.5, {"unknown"}), policy) == RejectReason::Duration);
}

TEST_CASE("label matching is exact, not substring") {
  const FilterPolicy policy;
  CHECK(!filter_source(meta_of("a", 4.0, {"unknown instrument"}), policy));
}

TEST_CASE("filtering is order-independent over a corpus") {
  std::vector<SourceClipMeta> corpus;
  std::mt19937_64 gen(11);
  for (int i = 0; i < 60; ++i) {
    const double dur = 0.5 + (gen() % 50) / 10.0;
    std::vector<std::string> labels = {std::string("label") + std::to_string(gen() % 8)};
    if (gen() % 5 == 0) labels.push_back("unknown");
    corpus.push_back(meta_of("id" + std::to_string(i), dur, labels));
  }

  const FilterPolicy policy;
  auto ids_of = [](const std::vector<SourceClipMeta>& v) {
    std::vector<std::string> ids;
    for (const auto& m : v) ids.push_back(m.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  const auto baseline = ids_of(filter_corpus(corpus, policy));
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(corpus.begin(), corpus.end(), gen);
    CHECK(ids_of(filter_corpus(corpus, policy)) == baseline);
  }
}

TEST_CASE("raising min_duration_s never admits a new clip") {
  std::vector<SourceClipMeta> corpus;
  std::mt19937_64 gen(23);
  for (int i = 0; i < 80; ++i)
    corpus.push_back(meta_of("id" + std::to_string(i), 0.2 + (gen() % 60) / 10.0, {"dog"}));

  FilterPolicy lower, higher;
  lower.min_duration_s = 1.5;
  higher.min_duration_s = 3.0;
  const auto loose = filter_corpus(corpus, lower);
  const auto strict = filter_corpus(corpus, higher);

  for (const auto& m : strict) {
    CHECK(std::any_of(loose.begin(), loose.end(),
                      [&m](const SourceClipMeta& x) { return x.id == m.id; }));
  }
}

TEST_CASE("JSONL source manifests parse and validate") {
  testutil::TempDir dir("srcman");
  {
    std::ofstream out(dir.path / "sources.jsonl");
    out << R"({"id":"a","audio_path":"a.wav","labels":["dog"],"start_s":0.0,"end_s":3.5})" << "\n";
    out << "\n";  // blank lines are skipped
    out << R"({"id":"b","audio_path":"b.wav","labels":["rain","wind"],"start_s":1.0,"end_s":6.0})" << "\n";
  }
  const auto corpus = load_source_manifest((dir.path / "sources.jsonl").string());
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].id == "a");
  CHECK(corpus[0].duration_s() == doctest::Approx(3.5));
  CHECK(corpus[1].labels.size() == 2);

  std::ofstream(dir.path / "bad.jsonl") << R"({"id":"x","audio_path":"x.wav","labels":[],"start_s":0,"end_s":3})" << "\n";
  CHECK_THROWS_AS(load_source_manifest((dir.path / "bad.jsonl").string()),
                  InvalidArgumentError);

  std::ofstream(dir.path / "bad2.jsonl") << "not json\n";
  CHECK_THROWS_AS(load_source_manifest((dir.path / "bad2.jsonl").string()),
                  InvalidArgumentError);
}
