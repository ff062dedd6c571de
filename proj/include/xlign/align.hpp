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

#ifndef XLIGN_ALIGN_HPP
#define XLIGN_ALIGN_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "xlign/embedding_space.hpp"

namespace xlign {

// A d x d linear map from source space to target space. orthogonal is a
// tag, not a recomputation: when set, ||W^T W - I||_F <= 1e-8 held at
// construction time.
struct LinearMap {
  Matrix matrix;
  bool orthogonal = false;
  double orthogonality_residual = 0.0;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Closed-form orthogonal solution of min_W sum ||W x_i - z_j||^2 over the
// dictionary, via SVD of the cross-covariance Z_D X_D^T: W = U V^T.
// Rank-deficient cross-covariances still return U V^T from the computed
// factors; the result may then be one of several minimizers.
LinearMap procrustes_fit(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const SeedDictionary& dict);

// sum_{(i,j) in dict} || W x_i - z_j ||^2 (duplicates de-duplicated,
// matching solver behavior).
double objective_value(const LinearMap& map, const EmbeddingSpace& src,
                       const EmbeddingSpace& tgt, const SeedDictionary& dict);

struct RefineConfig {
  int steps = 5;
  // Synthetic pairs are drawn from the top synthetic_pool most-frequent
  // words on each side (clamped to the vocabulary sizes).
  int synthetic_pool = 10000;
  int knn = 10;  // CSLS neighborhood size
};

// Pairs (i, j) over the frequency pools that are mutual CSLS nearest
// neighbors under the current map, ascending source index. Throws
// DataError when no mutual pair exists (alignment collapse).
SeedDictionary build_synthetic_dictionary(const LinearMap& map,
                                          const EmbeddingSpace& src,
                                          const EmbeddingSpace& tgt,
                                          const RefineConfig& cfg);

struct RefineResult {
  LinearMap map;
  std::vector<long> dictionary_sizes;  // per completed step
  bool stopped_early = false;
  std::string warning;
};

// Procrustes on the seed dictionary, then `steps` rounds of synthetic
// dictionary construction + refit. An empty synthetic dictionary stops
// the loop and returns the last valid map with a warning.
RefineResult refine(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                    const SeedDictionary& seed_dict, const RefineConfig& cfg);

// Map file: header "d orthogonal_flag", then d rows of d floats (%.17g).
void write_map(const LinearMap& map, std::ostream& out);
void write_map_file(const LinearMap& map, const std::string& path);
LinearMap read_map(std::istream& in);
LinearMap read_map_file(const std::string& path);

}  // namespace xlign

#endif  // XLIGN_ALIGN_HPP
