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

#include "mixcap/captioner.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mixcap/errors.hpp"

namespace mixcap {

std::string build_query(const std::vector<EventDescriptor>& descriptors) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& d : descriptors) {
    nlohmann::ordered_json j;
    j["sound"] = d.sound;
    j["description"] = d.description;
    j["order"] = d.order;
    list.push_back(std::move(j));
  }
  return list.dump();
}

std::vector<EventDescriptor> parse_query(const std::string& json_text) {
  nlohmann::json list;
  try {
    list = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("query JSON parse failure: ") + e.what(), json_text);
  }
  std::vector<EventDescriptor> out;
  for (const auto& j : list) {
    EventDescriptor d;
    d.sound = j.at("sound").get<std::string>();
    d.description = j.at("description").get<std::vector<std::string>>();
    d.order = j.at("order").get<int>();
    out.push_back(std::move(d));
  }
  return out;
}

std::string default_prompt_instruction() {
  return "I will provide a list of scenarios. For each scenario, I want you to "
         "provide a short, one sentence story. Each scenario will be described "
         "as a JSON list. Pay particular attention to the order attribute, "
         "which describes the temporal ordering of the story. Only return the "
         "stories.";
}

std::string build_prompt(std::size_t n_scenarios, const std::string& instruction_override) {
  if (n_scenarios < 1)
    throw InvalidArgumentError("build_prompt: need at least one scenario");
  std::string out =
      instruction_override.empty() ? default_prompt_instruction() : instruction_override;
  out += "\n";
  for (std::size_t i = 1; i <= n_scenarios; ++i)
    out += "\n" + std::to_string(i) + ". {scenario_" + std::to_string(i) + "}";
  return out;
}

std::vector<std::string> parse_numbered_list(const std::string& response,
                                             std::size_t expected_count) {
  std::vector<std::string> captions;
  std::istringstream in(response);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t p = 0;
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    std::size_t d = p;
    while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
    if (d == p || d >= line.size() || line[d] != '.') continue;  // not a numbered entry
    std::size_t body = d + 1;
    while (body < line.size() && std::isspace(static_cast<unsigned char>(line[body]))) ++body;
    if (body < line.size()) captions.push_back(line.substr(body));
  }
  if (captions.size() != expected_count) {
    throw ParseError("expected " + std::to_string(expected_count) +
                         " numbered captions, parsed " + std::to_string(captions.size()),
                     response);
  }
  return captions;
}

// ---------------------------------------------------------------------------
// Offline template backend

namespace {

const std::map<std::string, std::string>& verb_table() {
  static const std::map<std::string, std::string> table = {
      {"dog", "barks"},          {"cat", "meows"},
      {"bird", "chirps"},        {"rain", "falls"},
      {"wind", "blows"},         {"thunder", "rumbles"},
      {"car", "drives"},         {"truck", "rumbles"},
      {"train", "passes"},       {"engine", "revs"},
      {"door", "creaks"},        {"bell", "rings"},
      {"horn", "blares"},        {"siren", "wails"},
      {"baby", "cries"},         {"crowd", "cheers"},
      {"firecracker", "pops"},   {"water", "flows"},
      {"music", "plays"},        {"drum", "beats"},
      {"clock", "ticks"},        {"applause", "erupts"},
  };
  return table;
}

const std::set<std::string>& uncountable_subjects() {
  static const std::set<std::string> set = {
      "rain", "wind", "thunder", "music",  "water",
      "traffic", "applause", "silence", "static", "chatter",
  };
  return set;
}

struct Rendering {
  std::vector<std::string> adverbs;
  std::vector<std::string> phrases;
};

// Keyword renderings keep a lexicon word intact in the caption text so
// modifier statistics and flipping see them ("high-pitched", "short", ...).
void render_keyword(const std::string& keyword, Rendering& r) {
  if (keyword == "loud") r.adverbs.push_back("loudly");
  else if (keyword == "quiet") r.adverbs.push_back("quietly");
  else if (keyword == "fast") r.adverbs.push_back("quickly");
  else if (keyword == "slow") r.adverbs.push_back("slowly");
  else if (keyword == "high-pitch") r.phrases.push_back("sounding high-pitched");
  else if (keyword == "low-pitch") r.phrases.push_back("sounding low-pitched");
  else if (keyword == "short") r.phrases.push_back("for a short moment");
  else if (keyword == "background") r.phrases.push_back("in the background");
  else r.phrases.push_back("in a " + keyword + " manner");
}

std::string event_clause(const EventDescriptor& d) {
  const std::string& subject = d.sound;

  std::string clause;
  if (uncountable_subjects().count(subject) == 0) {
    const bool vowel = !subject.empty() &&
                       std::string("aeiou").find(static_cast<char>(std::tolower(
                           static_cast<unsigned char>(subject[0])))) != std::string::npos;
    clause += vowel ? "an " : "a ";
  }
  clause += subject;

  const auto verb = verb_table().find(subject);
  clause += " " + (verb != verb_table().end() ? verb->second : std::string("is heard"));

  Rendering r;
  std::string background_phrase;
  for (const auto& kw : d.description) {
    if (kw == "background") {
      background_phrase = "in the background";
      continue;
    }
    render_keyword(kw, r);
  }
  for (const auto& a : r.adverbs) clause += " " + a;
  for (const auto& p : r.phrases) clause += " " + p;
  if (!background_phrase.empty()) clause += " " + background_phrase;
  return clause;
}

}  // namespace

std::string OfflineTemplateBackend::caption_scenario(
    const std::vector<EventDescriptor>& descriptors) {
  if (descriptors.empty())
    throw InvalidArgumentError("caption_scenario: empty scenario");

  std::string text;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (i > 0) {
      const bool simultaneous = descriptors[i].order == descriptors[i - 1].order;
      text += simultaneous ? " while " : ", then ";
    }
    text += event_clause(descriptors[i]);
  }

  if (count_words(text) < 6) text += " somewhere close by";
  text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text + ".";
}

std::vector<std::string> OfflineTemplateBackend::complete(
    const std::string& /*prompt*/, const std::string& query_payload) {
  // The payload is the numbered scenario list; consume the same wire
  // format the HTTP backend sends.
  std::vector<std::string> captions;
  std::istringstream in(query_payload);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t bracket = line.find('[');
    if (bracket == std::string::npos) continue;
    captions.push_back(caption_scenario(parse_query(line.substr(bracket))));
  }
  return captions;
}

// ---------------------------------------------------------------------------
// Retry / postprocess

namespace {

std::string numbered_payload(const CaptionQuery& query) {
  std::string payload;
  for (std::size_t i = 0; i < query.scenarios.size(); ++i) {
    if (i) payload += "\n";
    payload += std::to_string(i + 1) + ". " + build_query(query.scenarios[i]);
  }
  return payload;
}

}  // namespace

std::vector<std::string> generate_captions(const CaptionQuery& query,
                                           CaptionBackend& backend,
                                           const RetryPolicy& retry,
                                           const std::string& instruction_override) {
  if (query.scenarios.empty()) return {};
  const std::string prompt = instruction_override.empty() ? default_prompt_instruction()
                                                          : instruction_override;
  const std::string payload = numbered_payload(query);

  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, retry.max_attempts); ++attempt) {
    try {
      auto captions = backend.complete(prompt, payload);
      if (captions.size() == query.scenarios.size()) {
        for (auto& c : captions) c = normalize_caption(c);
        return captions;
      }
      last_error = "backend returned " + std::to_string(captions.size()) +
                   " captions for " + std::to_string(query.scenarios.size()) +
                   " scenarios";
    } catch (const ParseError& e) {
      last_error = e.what();
    }
  }
  throw BackendError("caption batch " + query.batch_id + " failed after retries: " +
                     last_error);
}

const char* caption_reject_name(CaptionReject reason) {
  switch (reason) {
    case CaptionReject::TooShort: return "too_short";
    case CaptionReject::TooLong: return "too_long";
  }
  return "unknown";
}

std::string normalize_caption(const std::string& caption) {
  std::size_t b = 0, e = caption.size();
  while (b < e && std::isspace(static_cast<unsigned char>(caption[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(caption[e - 1]))) --e;

  // Leading list numeral: "12. a caption" -> "a caption"
  std::size_t d = b;
  while (d < e && std::isdigit(static_cast<unsigned char>(caption[d]))) ++d;
  if (d > b && d < e && caption[d] == '.') {
    std::size_t body = d + 1;
    while (body < e && std::isspace(static_cast<unsigned char>(caption[body]))) ++body;
    if (body < e) b = body;
  }

  // Surrounding quotes.
  if (e - b >= 2 && (caption[b] == '"' || caption[b] == '\'') && caption[e - 1] == caption[b]) {
    ++b;
    --e;
  }
  return caption.substr(b, e - b);
}

std::size_t count_words(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  std::size_t n = 0;
  while (in >> token) ++n;
  return n;
}

std::optional<CaptionReject> postprocess_caption(const std::string& caption,
                                                 const PostprocessPolicy& policy) {
  const auto words = count_words(normalize_caption(caption));
  if (words < static_cast<std::size_t>(policy.min_words)) return CaptionReject::TooShort;
  if (words > static_cast<std::size_t>(policy.max_words)) return CaptionReject::TooLong;
  return std::nullopt;
}

}  // namespace mixcap
