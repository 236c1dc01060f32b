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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixcap/composer.hpp"

namespace mixcap {

/// A batch of scenarios submitted to the caption backend together.
struct CaptionQuery {
  std::vector<std::vector<EventDescriptor>> scenarios;
  std::string batch_id;
};

/// Serialize descriptors as a JSON list of {"sound", "description",
/// "order"} objects, in clip order, byte-stable.
std::string build_query(const std::vector<EventDescriptor>& descriptors);

/// Inverse of build_query (lossless round trip).
std::vector<EventDescriptor> parse_query(const std::string& json_text);

/// Default instruction text sent ahead of the scenario list.
std::string default_prompt_instruction();

/// Instruction followed by a numbered placeholder entry per scenario
/// ("1. <scenario 1>" ...). generate_captions substitutes the scenario
/// JSON for each placeholder.
std::string build_prompt(std::size_t n_scenarios, const std::string& instruction_override = "");

/// Split a numbered-list response ("1. ...\n2. ...") into one caption per
/// entry, stripping the numeral prefixes. Throws ParseError (raw text
/// preserved) when the count does not match expected_count.
std::vector<std::string> parse_numbered_list(const std::string& response,
                                             std::size_t expected_count);

/// Pluggable caption generator. Implementations must be safe to call from
/// multiple threads.
class CaptionBackend {
 public:
  virtual ~CaptionBackend() = default;
  virtual std::string name() const = 0;
  /// One caption per scenario, index-aligned. `query_payload` is the
  /// numbered scenario list built from build_query outputs.
  virtual std::vector<std::string> complete(const std::string& prompt,
                                            const std::string& query_payload) = 0;
};

/// Deterministic rule-based backend: per-event clause = subject +
/// verb-from-label + keyword adverbials, clauses joined by order relation
/// words ("while" for simultaneous events, ", then" for successive ones).
/// Ships in-tree so tests and CI never touch a network.
class OfflineTemplateBackend : public CaptionBackend {
 public:
  std::string name() const override { return "offline"; }
  std::vector<std::string> complete(const std::string& prompt,
                                    const std::string& query_payload) override;

  /// Caption for one scenario; exposed for direct use and tests.
  static std::string caption_scenario(const std::vector<EventDescriptor>& descriptors);
};

struct HttpBackendConfig {
  std::string endpoint = "http://localhost:8080/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.7;
  std::string api_key_env = "MIXCAP_API_KEY";
  int timeout_s = 60;
};

/// Generic chat-completion client: POST JSON {model, temperature,
/// messages}, bearer-token auth, expects choices[0].message.content.
class HttpChatBackend : public CaptionBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);
  std::string name() const override { return "http"; }
  std::vector<std::string> complete(const std::string& prompt,
                                    const std::string& query_payload) override;

  /// Parse a chat-completion response body; exposed for tests.
  static std::string extract_content(const std::string& body);

 private:
  HttpBackendConfig config_;
};

struct RetryPolicy {
  int max_attempts = 2;
};

/// One caption per scenario. Count mismatches and parse failures retry up
/// to the policy limit, then raise BackendError.
std::vector<std::string> generate_captions(const CaptionQuery& query,
                                           CaptionBackend& backend,
                                           const RetryPolicy& retry = {},
                                           const std::string& instruction_override = "");

struct PostprocessPolicy {
  int min_words = 6;
  int max_words = 45;
};

enum class CaptionReject { TooShort, TooLong };

const char* caption_reject_name(CaptionReject reason);

/// Strip surrounding quotes and a leading list numeral ("3. ") from a raw
/// caption; used before word counting and before storing.
std::string normalize_caption(const std::string& caption);

/// nullopt = accept. Word count = whitespace token count of the
/// normalized caption.
std::optional<CaptionReject> postprocess_caption(const std::string& caption,
                                                 const PostprocessPolicy& policy);

std::size_t count_words(const std::string& text);

}  // namespace mixcap
