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

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mixcap {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Paired audio/text embeddings. Rows with equal pair_groups entries
/// describe matching content (duplicate positives in a batch).
struct EmbeddingSet {
  Matrix audio;                         // B x D
  Matrix text;                          // B x D
  std::vector<std::string> pair_groups; // length B; empty => all distinct
};

/// S[i][j] = audio_i . text_j.
Matrix similarity_matrix(const EmbeddingSet& embeddings);
Matrix similarity_matrix(const Matrix& audio, const Matrix& text);

/// M[i][j] = 0 when i != j and group(i) == group(j), else 1. The diagonal
/// is always 1 so the positive term stays in the loss denominator.
Matrix build_mask(const std::vector<std::string>& pair_groups);

struct InfoNceResult {
  double total = 0.0;          // text_to_audio + audio_to_text
  double text_to_audio = 0.0;  // rows as anchors
  double audio_to_text = 0.0;  // columns as anchors
};

/// Masked InfoNCE over a similarity matrix, computed with per-row/column
/// max subtraction. M must have an all-ones diagonal; with M all ones this
/// is the standard InfoNCE.
InfoNceResult info_nce_loss(const Matrix& similarity, const Matrix& mask, double temperature);

/// Analytical d(total)/dS for trainer integration.
Matrix info_nce_gradient(const Matrix& similarity, const Matrix& mask, double temperature);

/// Percent of rows (text queries) whose top-k columns contain the
/// diagonal ground truth. Ties resolve lower-index-first.
double recall_at_k(const Matrix& similarity, std::size_t k);

/// recall_at_k of audio/text restricted to the given rows, for each k.
std::vector<double> mdt_recall(const Matrix& audio, const Matrix& text,
                               const std::vector<std::size_t>& k_list);

enum class ModifierCategory { Duration, Pitch, Speed, Volume };

const char* modifier_category_name(ModifierCategory category);

/// Word -> antonym map per category. Lookups are directed: a word may map
/// to an antonym whose own mapping differs (e.g. "soft" -> "loud" ->
/// "quiet"), so involution is only guaranteed for mutual pairs.
class ModifierLexicon {
 public:
  void add(ModifierCategory category, const std::string& word, const std::string& antonym);

  /// nullptr when the word is not in the lexicon.
  const std::string* antonym(const std::string& lower_word) const;
  const ModifierCategory* category(const std::string& lower_word) const;

  const std::map<std::string, std::pair<std::string, ModifierCategory>>& entries() const {
    return entries_;
  }

  static ModifierLexicon default_lexicon();

 private:
  std::map<std::string, std::pair<std::string, ModifierCategory>> entries_;
};

struct FlipResult {
  std::string flipped;
  std::set<ModifierCategory> categories_hit;
};

/// Replace every token whose lowercase core is in the lexicon by its
/// antonym, preserving leading capitalization and surrounding punctuation.
FlipResult flip_modifiers(const std::string& caption, const ModifierLexicon& lexicon);

/// Percent of rows where audio_i . flipped_i strictly exceeds
/// audio_i . original_i (ties count as not-closer). Lower is better.
double mut_score(const Matrix& audio, const Matrix& text_original,
                 const Matrix& text_flipped);

struct CategoryStat {
  std::size_t count = 0;
  double percent = 0.0;
};

/// Per category: captions containing at least one lexicon word of that
/// category, as count and percent of all captions.
std::map<ModifierCategory, CategoryStat> modifier_stats(
    const std::vector<std::string>& captions, const ModifierLexicon& lexicon);

/// Embedding matrix file I/O: the FeatureMatrix binary layout (8-byte
/// header + float32 LE row-major), values widened to double in memory.
void save_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace mixcap
