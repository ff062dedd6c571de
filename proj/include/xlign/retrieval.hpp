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

#ifndef XLIGN_RETRIEVAL_HPP
#define XLIGN_RETRIEVAL_HPP

#include <string>
#include <vector>

#include "xlign/align.hpp"
#include "xlign/embedding_space.hpp"
#include "xlign/vec_io.hpp"

namespace xlign {

struct RetrievalCriterion {
  enum class Kind { NearestNeighbor, Csls };
  Kind kind = Kind::Csls;
  int knn = 10;

  static RetrievalCriterion nearest_neighbor() {
    return {Kind::NearestNeighbor, 0};
  }
  static RetrievalCriterion csls(int knn = 10) { return {Kind::Csls, knn}; }
  // "nn" | "csls"
  static RetrievalCriterion parse(const std::string& name, int knn = 10);
  std::string name() const;
};

struct RetrievalOptions {
  RetrievalCriterion criterion = RetrievalCriterion::csls();
  // Words per side used for CSLS penalty estimation; 0 = full vocabulary.
  int penalty_pool = 0;
  // Queries are scored in blocks of this many to bound the score matrix.
  int block_size = 512;
};

// Mean cosine between query and its k most-similar pool columns.
// exclude_index skips one pool column (pass the query's own index when
// query and pool share a space).
double knn_mean_similarity(const Vector& query, const EmbeddingSpace& pool,
                           int k, int exclude_index = -1);

// CSLS(q, z_j) = 2 cos(q, z_j) - r_query - r_targets[j] for all j.
Vector csls_scores(const Vector& mapped_query, const EmbeddingSpace& tgt,
                   double r_query, const Vector& r_targets);

struct Prediction {
  int target_index = -1;
  double score = 0.0;
};

// Ranked target predictions for each query under the criterion. Cosines
// are computed over re-normalized vectors; ties break toward the smaller
// (more frequent) target index.
std::vector<std::vector<Prediction>> translate_topk(
    const LinearMap& map, const EmbeddingSpace& src, const EmbeddingSpace& tgt,
    const std::vector<int>& query_indices, int topk,
    const RetrievalOptions& opts = {});

struct EvaluationReport {
  struct Entry {
    std::string source;
    std::string predicted;
    double score = 0.0;
    bool correct = false;
  };
  double accuracy = 0.0;
  long total_queries = 0;
  long correct = 0;
  std::string criterion;
  std::vector<Entry> predictions;
};

// P@1 over one query per unique source index; a query counts as correct
// when the top prediction is in its acceptable target set.
EvaluationReport evaluate_p1(const LinearMap& map, const EmbeddingSpace& src,
                             const EmbeddingSpace& tgt,
                             const MultiDictionary& test,
                             const RetrievalOptions& opts = {});

struct SpearmanResult {
  double rho = 0.0;
  long covered_pairs = 0;
  long skipped_pairs = 0;  // at least one word out of vocabulary
};

// Spearman rank correlation between cosine similarities and human scores,
// average ranks for ties. Throws DataError when no pair is covered.
SpearmanResult spearman_wordsim(const EmbeddingSpace& space,
                                const SimilarityDataset& dataset);

struct NeighborEntry {
  std::string word;
  double cosine = 0.0;
};

// Top-k cosine neighbors of a word inside its own space, the word itself
// excluded.
std::vector<NeighborEntry> neighborhood(const EmbeddingSpace& space,
                                        const std::string& word, int k);

struct NeighborhoodReport {
  std::string word_a;
  std::string word_b;
  std::vector<NeighborEntry> neighbors_a;
  std::vector<NeighborEntry> neighbors_b;
};

// Side-by-side neighbor lists for a word in each of two spaces (e.g. a
// translation pair before/after normalization).
NeighborhoodReport neighborhood_report(const EmbeddingSpace& space_a,
                                       const EmbeddingSpace& space_b,
                                       const std::string& word_a,
                                       const std::string& word_b, int k);

}  // namespace xlign

#endif  // XLIGN_RETRIEVAL_HPP
