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

#ifndef XLIGN_RCSLS_HPP
#define XLIGN_RCSLS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "xlign/align.hpp"
#include "xlign/embedding_space.hpp"

namespace xlign {

// Relaxed CSLS training: minimize the negated mean CSLS score of the
// dictionary pairs by mini-batch subgradient descent, without the
// orthogonality constraint. Requires unit-length inputs so dot products
// stand in for cosines.
struct RcslsConfig {
  std::vector<double> learning_rates{1.0, 10.0, 25.0, 50.0};
  std::vector<int> epoch_candidates{10, 20};
  int knn = 10;
  // Neighbor sets are drawn from the top neighbor_pool most-frequent
  // words per side (clamped to vocabulary size).
  int neighbor_pool = 50000;
  int batch_size = 512;
  unsigned long long seed = 0;
  // Pairs held out of training for validation when no validation
  // dictionary is supplied.
  int holdout = 500;
};

// Neighbor sets for one batch of pairs, frozen so the piecewise-linear
// loss and its subgradient can be evaluated at a fixed W.
struct CslsNeighborSets {
  // target_neighbors[p] = indices into tgt of the knn pool targets most
  // aligned with W x_{i_p}; source_neighbors[p] = indices into src of the
  // knn pool sources whose maps are most aligned with z_{j_p}.
  std::vector<std::vector<int>> target_neighbors;
  std::vector<std::vector<int>> source_neighbors;
};

CslsNeighborSets rcsls_neighbor_sets(const Matrix& W,
                                     const EmbeddingSpace& src,
                                     const EmbeddingSpace& tgt,
                                     const std::vector<std::pair<int, int>>& pairs,
                                     int knn, int neighbor_pool);

// Mean over pairs of
//   -2 (W x_i)' z_j + (1/k) sum_{t in NT} (W x_i)' z_t
//                   + (1/k) sum_{s in NS} (W x_s)' z_j
// with the supplied frozen neighbor sets.
double rcsls_loss_frozen(const Matrix& W, const EmbeddingSpace& src,
                         const EmbeddingSpace& tgt,
                         const std::vector<std::pair<int, int>>& pairs,
                         const CslsNeighborSets& sets, int knn);

// Exact gradient of rcsls_loss_frozen in W (the subgradient of the true
// loss at points where the neighbor sets are locally constant).
Matrix rcsls_gradient_frozen(const Matrix& W, const EmbeddingSpace& src,
                             const EmbeddingSpace& tgt,
                             const std::vector<std::pair<int, int>>& pairs,
                             const CslsNeighborSets& sets, int knn);

// Loss with neighbor sets recomputed at W. Checks the unit-length
// precondition (residual <= 1e-6 on both spaces).
double rcsls_loss(const Matrix& W, const EmbeddingSpace& src,
                  const EmbeddingSpace& tgt, const SeedDictionary& dict,
                  int knn, int neighbor_pool);

struct RcslsGridPoint {
  double learning_rate = 0.0;
  int epochs = 0;
  double validation_p1 = 0.0;
  bool diverged = false;
};

struct RcslsResult {
  LinearMap map;  // orthogonal = false
  double learning_rate = 0.0;
  int epochs = 0;
  double validation_p1 = 0.0;
  // Full-dictionary loss of the winning grid point: initial value, then
  // one entry per epoch.
  std::vector<double> loss_trace;
  std::vector<RcslsGridPoint> grid;
};

// Initializes from procrustes_fit on the training pairs, runs constant-step
// mini-batch subgradient descent for each (lr, epochs) grid point with
// per-batch neighbor sets, and keeps the point with the best validation
// P@1 under CSLS retrieval (ties: earlier grid point). A grid point whose
// loss turns non-finite is marked diverged and skipped. Without
// valid_dict, cfg.holdout pairs are split off the training dictionary by
// seeded shuffle.
RcslsResult rcsls_train(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                        const SeedDictionary& train_dict,
                        const std::optional<SeedDictionary>& valid_dict,
                        const RcslsConfig& cfg);

}  // namespace xlign

#endif  // XLIGN_RCSLS_HPP
