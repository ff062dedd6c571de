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

#include "xlign/embedding_space.hpp"

#include <set>
#include <utility>

#include "xlign/errors.hpp"

namespace xlign {

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> vocab, Matrix matrix)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)) {
  if (vocab_.empty()) throw DataError("embedding space: empty vocabulary");
  if (matrix_.rows() < 1) throw DataError("embedding space: dimension must be >= 1");
  if (static_cast<std::size_t>(matrix_.cols()) != vocab_.size()) {
    throw DataError("embedding space: vocabulary size " +
                    std::to_string(vocab_.size()) + " != matrix columns " +
                    std::to_string(matrix_.cols()));
  }
  if (!matrix_.allFinite()) {
    throw DataError("embedding space: matrix contains a non-finite value");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    auto [it, inserted] = index_.emplace(vocab_[i], static_cast<int>(i));
    if (!inserted) {
      throw DataError("embedding space: duplicate word '" + vocab_[i] + "'");
    }
  }
}

int EmbeddingSpace::index_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

EmbeddingSpace EmbeddingSpace::with_matrix(Matrix matrix) const {
  if (matrix.rows() != matrix_.rows() || matrix.cols() != matrix_.cols()) {
    throw DataError("with_matrix: replacement shape differs");
  }
  EmbeddingSpace out;
  out.vocab_ = vocab_;
  out.index_ = index_;
  out.matrix_ = std::move(matrix);
  if (!out.matrix_.allFinite()) {
    throw NumericError("with_matrix: replacement contains a non-finite value");
  }
  return out;
}

std::vector<std::pair<int, int>> solver_pairs(const SeedDictionary& dict,
                                              int src_size, int tgt_size) {
  if (dict.empty()) throw DataError("dictionary is empty");
  std::vector<std::pair<int, int>> out;
  out.reserve(dict.pairs.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : dict.pairs) {
    if (i < 0 || i >= src_size || j < 0 || j >= tgt_size) {
      throw DataError("dictionary pair (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") out of range");
    }
    if (seen.insert({i, j}).second) out.emplace_back(i, j);
  }
  return out;
}

MultiDictionary to_multi_dictionary(const SeedDictionary& dict) {
  MultiDictionary out;
  for (const auto& [i, j] : dict.pairs) out.entries[i].insert(j);
  return out;
}

}  // namespace xlign
