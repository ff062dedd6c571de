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

#ifndef XLIGN_VEC_IO_HPP
#define XLIGN_VEC_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "xlign/embedding_space.hpp"

namespace xlign {

struct VecParseOptions {
  // Keep only the first max_vocab rows (0 = all). Row order is frequency
  // order, so this is top-k truncation.
  long max_vocab = 0;
};

// fastText text format: header "n d", then one "word v1 ... vd" row per
// word, whitespace separated. A word is any run of non-whitespace bytes.
// Later duplicates of a word are dropped with a warning appended to
// *warnings. Throws DataError on malformed input (messages carry 1-based
// line numbers).
EmbeddingSpace parse_vec(std::istream& in, const VecParseOptions& opts = {},
                         std::vector<std::string>* warnings = nullptr);

EmbeddingSpace read_vec_file(const std::string& path,
                             const VecParseOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr);

// Emits the format parse_vec reads. Floats use %.17g so a round trip is
// value-exact.
void write_vec(const EmbeddingSpace& space, std::ostream& out);

void write_vec_file(const EmbeddingSpace& space, const std::string& path);

struct DictionaryLoad {
  SeedDictionary pairs;
  MultiDictionary multi;
  long skipped = 0;  // lines with at least one out-of-vocabulary word
};

// One "source_word target_word" pair per line; extra tokens are ignored,
// blank lines skipped. Out-of-vocabulary pairs are counted, not errors.
// A non-blank line with fewer than two tokens is a DataError.
DictionaryLoad load_dictionary(std::istream& in, const EmbeddingSpace& src,
                               const EmbeddingSpace& tgt);

DictionaryLoad load_dictionary_file(const std::string& path,
                                    const EmbeddingSpace& src,
                                    const EmbeddingSpace& tgt);

// Writes "src_word tgt_word" lines resolved through the vocabularies.
void write_dictionary(const SeedDictionary& dict, const EmbeddingSpace& src,
                      const EmbeddingSpace& tgt, std::ostream& out);

struct SimilarityDataset {
  struct Item {
    std::string word_a;
    std::string word_b;
    double human_score = 0.0;
  };
  std::vector<Item> items;
};

// Word-similarity file: "word_a word_b score" lines; lines starting with
// '#' are comments. Throws DataError when empty or malformed.
SimilarityDataset load_similarity_dataset(std::istream& in);

SimilarityDataset load_similarity_dataset_file(const std::string& path);

}  // namespace xlign

#endif  // XLIGN_VEC_IO_HPP
