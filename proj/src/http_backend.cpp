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

#include <cctype>
#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "mixcap/captioner.hpp"
#include "mixcap/errors.hpp"

namespace mixcap {

namespace {

/// Split "http://host:port/path" into (scheme://host:port, /path).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw InvalidArgumentError("http backend: endpoint must include a scheme: " + endpoint);
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

std::size_t count_numbered_entries(const std::string& payload) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos <= payload.size()) {
    std::size_t line_end = payload.find('\n', pos);
    if (line_end == std::string::npos) line_end = payload.size();
    std::size_t p = pos;
    while (p < line_end && std::isspace(static_cast<unsigned char>(payload[p]))) ++p;
    std::size_t d = p;
    while (d < line_end && std::isdigit(static_cast<unsigned char>(payload[d]))) ++d;
    if (d > p && d < line_end && payload[d] == '.') ++count;
    if (line_end == payload.size()) break;
    pos = line_end + 1;
  }
  return count;
}

}  // namespace

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {}

std::string HttpChatBackend::extract_content(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("chat response is not JSON: ") + e.what(), body);
  }
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("chat response missing choices[0].message.content: ") +
                         e.what(),
                     body);
  }
}

std::vector<std::string> HttpChatBackend::complete(const std::string& prompt,
                                                   const std::string& query_payload) {
  const auto [base, path] = split_endpoint(config_.endpoint);

  nlohmann::json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", prompt + "\n\n" + query_payload}}});

  httplib::Client client(base);
  client.set_read_timeout(config_.timeout_s, 0);
  client.set_connection_timeout(config_.timeout_s, 0);

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str());
      key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw BackendError("http backend: request to " + config_.endpoint +
                       " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw BackendError("http backend: status " + std::to_string(res->status) + ": " +
                       res->body);

  const std::string content = extract_content(res->body);
  return parse_numbered_list(content, count_numbered_entries(query_payload));
}

}  // namespace mixcap
