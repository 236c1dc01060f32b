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

#include "mixcap/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mixcap/errors.hpp"
#include "mixcap/features.hpp"

namespace mixcap {

Matrix similarity_matrix(const Matrix& audio, const Matrix& text) {
  if (audio.cols != text.cols)
    throw DimensionMismatchError("similarity: embedding dimensions differ (" +
                                 std::to_string(audio.cols) + " vs " +
                                 std::to_string(text.cols) + ")");
  if (audio.rows != text.rows)
    throw DimensionMismatchError("similarity: row counts differ (" +
                                 std::to_string(audio.rows) + " vs " +
                                 std::to_string(text.rows) + ")");
  Matrix s(audio.rows, text.rows);
  for (std::size_t i = 0; i < audio.rows; ++i) {
    for (std::size_t j = 0; j < text.rows; ++j) {
      double acc = 0.0;
      for (std::size_t d = 0; d < audio.cols; ++d)
        acc += audio.at(i, d) * text.at(j, d);
      s.at(i, j) = acc;
    }
  }
  return s;
}

Matrix similarity_matrix(const EmbeddingSet& embeddings) {
  return similarity_matrix(embeddings.audio, embeddings.text);
}

Matrix build_mask(const std::vector<std::string>& pair_groups) {
  const std::size_t b = pair_groups.size();
  Matrix m(b, b, 1.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (i != j && pair_groups[i] == pair_groups[j]) m.at(i, j) = 0.0;
    }
  }
  return m;
}

namespace {

void check_loss_inputs(const Matrix& s, const Matrix& m, double temperature) {
  if (s.rows != s.cols) throw DimensionMismatchError("info_nce: similarity must be square");
  if (m.rows != s.rows || m.cols != s.cols)
    throw DimensionMismatchError("info_nce: mask shape differs from similarity");
  if (temperature <= 0) throw InvalidArgumentError("info_nce: temperature must be > 0");
  for (std::size_t i = 0; i < s.rows; ++i) {
    if (m.at(i, i) != 1.0)
      throw InvalidArgumentError("info_nce: mask diagonal must be all ones");
  }
}

/// log sum_j m_j * exp(x_j / tau), max-subtracted. Entries with m_j = 0
/// are excluded entirely (mask wins over magnitude).
double masked_lse(const Matrix& s, const Matrix& m, double tau, std::size_t fixed,
                  bool fixed_is_row) {
  const std::size_t n = s.rows;
  double hi = -HUGE_VAL;
  for (std::size_t j = 0; j < n; ++j) {
    const double mij = fixed_is_row ? m.at(fixed, j) : m.at(j, fixed);
    if (mij == 0.0) continue;
    const double x = (fixed_is_row ? s.at(fixed, j) : s.at(j, fixed)) / tau;
    hi = std::max(hi, x);
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double mij = fixed_is_row ? m.at(fixed, j) : m.at(j, fixed);
    if (mij == 0.0) continue;
    const double x = (fixed_is_row ? s.at(fixed, j) : s.at(j, fixed)) / tau;
    acc += mij * std::exp(x - hi);
  }
  return hi + std::log(acc);
}

}  // namespace

InfoNceResult info_nce_loss(const Matrix& s, const Matrix& m, double temperature) {
  check_loss_inputs(s, m, temperature);
  const std::size_t b = s.rows;
  const double inv_b = 1.0 / static_cast<double>(b);

  InfoNceResult r;
  for (std::size_t i = 0; i < b; ++i)
    r.text_to_audio += masked_lse(s, m, temperature, i, true) - s.at(i, i) / temperature;
  for (std::size_t j = 0; j < b; ++j)
    r.audio_to_text += masked_lse(s, m, temperature, j, false) - s.at(j, j) / temperature;
  r.text_to_audio *= inv_b;
  r.audio_to_text *= inv_b;
  r.total = r.text_to_audio + r.audio_to_text;
  return r;
}

Matrix info_nce_gradient(const Matrix& s, const Matrix& m, double temperature) {
  check_loss_inputs(s, m, temperature);
  const std::size_t b = s.rows;
  const double scale = 1.0 / (static_cast<double>(b) * temperature);

  Matrix g(b, b, 0.0);
  // Row-anchored term: masked softmax over each row minus the diagonal hit.
  for (std::size_t i = 0; i < b; ++i) {
    const double lse = masked_lse(s, m, temperature, i, true);
    for (std::size_t j = 0; j < b; ++j) {
      if (m.at(i, j) != 0.0)
        g.at(i, j) += scale * m.at(i, j) * std::exp(s.at(i, j) / temperature - lse);
    }
    g.at(i, i) -= scale;
  }
  // Column-anchored term.
  for (std::size_t j = 0; j < b; ++j) {
    const double lse = masked_lse(s, m, temperature, j, false);
    for (std::size_t i = 0; i < b; ++i) {
      if (m.at(i, j) != 0.0)
        g.at(i, j) += scale * m.at(i, j) * std::exp(s.at(i, j) / temperature - lse);
    }
    g.at(j, j) -= scale;
  }
  return g;
}

double recall_at_k(const Matrix& s, std::size_t k) {
  if (s.rows != s.cols) throw DimensionMismatchError("recall: similarity must be square");
  const std::size_t b = s.rows;
  if (k < 1 || k > b) throw InvalidArgumentError("recall: k must be in [1, B]");

  std::size_t hits = 0;
  for (std::size_t i = 0; i < b; ++i) {
    // rank of the ground truth with lower-index-first tie breaking
    std::size_t rank = 1;
    const double truth = s.at(i, i);
    for (std::size_t j = 0; j < b; ++j) {
      if (j == i) continue;
      if (s.at(i, j) > truth || (s.at(i, j) == truth && j < i)) ++rank;
    }
    if (rank <= k) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(b);
}

std::vector<double> mdt_recall(const Matrix& audio, const Matrix& text,
                               const std::vector<std::size_t>& k_list) {
  const Matrix s = similarity_matrix(audio, text);
  std::vector<double> out;
  out.reserve(k_list.size());
  for (std::size_t k : k_list) out.push_back(recall_at_k(s, k));
  return out;
}

const char* modifier_category_name(ModifierCategory category) {
  switch (category) {
    case ModifierCategory::Duration: return "duration";
    case ModifierCategory::Pitch: return "pitch";
    case ModifierCategory::Speed: return "speed";
    case ModifierCategory::Volume: return "volume";
  }
  return "unknown";
}

void ModifierLexicon::add(ModifierCategory category, const std::string& word,
                          const std::string& antonym) {
  entries_.emplace(word, std::make_pair(antonym, category));
  // Mutual entry unless the antonym already maps somewhere.
  entries_.emplace(antonym, std::make_pair(word, category));
}

const std::string* ModifierLexicon::antonym(const std::string& lower_word) const {
  const auto it = entries_.find(lower_word);
  return it == entries_.end() ? nullptr : &it->second.first;
}

const ModifierCategory* ModifierLexicon::category(const std::string& lower_word) const {
  const auto it = entries_.find(lower_word);
  return it == entries_.end() ? nullptr : &it->second.second;
}

ModifierLexicon ModifierLexicon::default_lexicon() {
  ModifierLexicon lex;
  lex.add(ModifierCategory::Volume, "loud", "quiet");
  lex.add(ModifierCategory::Volume, "loudly", "quietly");
  lex.add(ModifierCategory::Volume, "soft", "loud");
  lex.add(ModifierCategory::Speed, "fast", "slow");
  lex.add(ModifierCategory::Speed, "quickly", "slowly");
  lex.add(ModifierCategory::Speed, "rapid", "slow");
  lex.add(ModifierCategory::Speed, "swift", "slow");
  lex.add(ModifierCategory::Pitch, "high-pitched", "low-pitched");
  lex.add(ModifierCategory::Pitch, "high-pitch", "low-pitch");
  lex.add(ModifierCategory::Pitch, "deep", "shrill");
  lex.add(ModifierCategory::Duration, "short", "long");
  lex.add(ModifierCategory::Duration, "brief", "prolonged");
  return lex;
}

namespace {

bool is_token_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0 && c != '-';
}

std::string to_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Strip leading/trailing punctuation (hyphens stay); returns
/// (prefix, core, suffix).
void split_token(const std::string& token, std::string& prefix, std::string& core,
                 std::string& suffix) {
  std::size_t b = 0, e = token.size();
  while (b < e && is_token_punct(token[b])) ++b;
  while (e > b && is_token_punct(token[e - 1])) --e;
  prefix = token.substr(0, b);
  core = token.substr(b, e - b);
  suffix = token.substr(e);
}

}  // namespace

FlipResult flip_modifiers(const std::string& caption, const ModifierLexicon& lexicon) {
  FlipResult result;
  std::string out;
  std::size_t pos = 0;
  while (pos < caption.size()) {
    if (std::isspace(static_cast<unsigned char>(caption[pos]))) {
      out += caption[pos++];
      continue;
    }
    std::size_t end = pos;
    while (end < caption.size() && !std::isspace(static_cast<unsigned char>(caption[end])))
      ++end;
    const std::string token = caption.substr(pos, end - pos);
    pos = end;

    std::string prefix, core, suffix;
    split_token(token, prefix, core, suffix);
    const std::string lower = to_lower(core);
    const std::string* anto = lexicon.antonym(lower);
    if (anto == nullptr) {
      out += token;
      continue;
    }
    result.categories_hit.insert(*lexicon.category(lower));
    std::string replacement = *anto;
    if (!core.empty() && std::isupper(static_cast<unsigned char>(core[0])) &&
        !replacement.empty()) {
      replacement[0] =
          static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
    }
    out += prefix + replacement + suffix;
  }
  result.flipped = std::move(out);
  return result;
}

double mut_score(const Matrix& audio, const Matrix& text_original,
                 const Matrix& text_flipped) {
  if (audio.rows != text_original.rows || audio.rows != text_flipped.rows ||
      audio.cols != text_original.cols || audio.cols != text_flipped.cols)
    throw DimensionMismatchError("mut: embedding shapes must match");
  if (audio.rows == 0) return 0.0;

  std::size_t closer = 0;
  for (std::size_t i = 0; i < audio.rows; ++i) {
    double dot_orig = 0.0, dot_flip = 0.0;
    for (std::size_t d = 0; d < audio.cols; ++d) {
      dot_orig += audio.at(i, d) * text_original.at(i, d);
      dot_flip += audio.at(i, d) * text_flipped.at(i, d);
    }
    if (dot_flip > dot_orig) ++closer;  // ties are not-closer
  }
  return 100.0 * static_cast<double>(closer) / static_cast<double>(audio.rows);
}

std::map<ModifierCategory, CategoryStat> modifier_stats(
    const std::vector<std::string>& captions, const ModifierLexicon& lexicon) {
  std::map<ModifierCategory, CategoryStat> stats;
  for (auto c : {ModifierCategory::Duration, ModifierCategory::Pitch,
                 ModifierCategory::Speed, ModifierCategory::Volume})
    stats[c] = {};

  for (const auto& caption : captions) {
    std::set<ModifierCategory> hit;
    std::size_t pos = 0;
    while (pos < caption.size()) {
      while (pos < caption.size() && std::isspace(static_cast<unsigned char>(caption[pos])))
        ++pos;
      std::size_t end = pos;
      while (end < caption.size() && !std::isspace(static_cast<unsigned char>(caption[end])))
        ++end;
      if (end > pos) {
        std::string prefix, core, suffix;
        split_token(caption.substr(pos, end - pos), prefix, core, suffix);
        if (const auto* cat = lexicon.category(to_lower(core))) hit.insert(*cat);
      }
      pos = end;
    }
    for (auto c : hit) ++stats[c].count;
  }

  const double total = captions.empty() ? 1.0 : static_cast<double>(captions.size());
  for (auto& [cat, stat] : stats)
    stat.percent = 100.0 * static_cast<double>(stat.count) / total;
  return stats;
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  FeatureMatrix f;
  f.n_frames = m.rows;
  f.n_bins = m.cols;
  f.values.assign(m.data.begin(), m.data.end());
  save_feature_matrix(f, path);
}

Matrix load_matrix(const std::filesystem::path& path) {
  const FeatureMatrix f = load_feature_matrix(path);
  Matrix m(f.n_frames, f.n_bins);
  std::copy(f.values.begin(), f.values.end(), m.data.begin());
  return m;
}

}  // namespace mixcap
