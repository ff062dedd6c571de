//  Copyright 2026 xlign authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#ifndef XLIGN_EMBEDDING_SPACE_HPP
#define XLIGN_EMBEDDING_SPACE_HPP

#include <Eigen/Dense>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace xlign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A vocabulary and its d x n embedding matrix; column i is the vector of
// word i. Index order follows file order, which by convention is frequency
// order (most frequent first). Immutable once built; safe to share
// read-only across threads.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;

  // Validates invariants: no duplicate words, finite entries, n >= 1,
  // d >= 1, vocab size == matrix columns. Throws DataError otherwise.
  EmbeddingSpace(std::vector<std::string> vocab, Matrix matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int size() const { return static_cast<int>(matrix_.cols()); }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const Matrix& matrix() const { return matrix_; }

  const std::string& word(int index) const { return vocab_.at(index); }

  // -1 when absent.
  int index_of(const std::string& word) const;

  Vector column(int index) const { return matrix_.col(index); }

  // Returns a space with the same vocabulary and a replacement matrix of
  // identical shape. Used by the normalization operations, which transform
  // vectors but never the vocabulary.
  EmbeddingSpace with_matrix(Matrix matrix) const;

 private:
  std::vector<std::string> vocab_;
  Matrix matrix_;
  std::unordered_map<std::string, int> index_;
};

// Ordered translation pairs (source_index, target_index). Duplicates are
// allowed in storage; solvers de-duplicate before use.
struct SeedDictionary {
  std::vector<std::pair<int, int>> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

// Evaluation dictionary: each source index maps to its set of acceptable
// translations. Ordered containers keep iteration deterministic.
struct MultiDictionary {
  std::map<int, std::set<int>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

// De-duplicated copy of the pairs, original order preserved, with all
// indices range-checked against the two spaces. Throws DataError on an
// out-of-range index or an empty result.
std::vector<std::pair<int, int>> solver_pairs(const SeedDictionary& dict,
                                              int src_size, int tgt_size);

MultiDictionary to_multi_dictionary(const SeedDictionary& dict);

}  // namespace xlign

#endif  // XLIGN_EMBEDDING_SPACE_HPP
