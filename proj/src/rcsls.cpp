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

#include "xlign/rcsls.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dense_topk.hpp"
#include "xlign/errors.hpp"
#include "xlign/normalize.hpp"
#include "xlign/retrieval.hpp"
#include "xlign/rng.hpp"

namespace xlign {

namespace {

constexpr double kUnitLengthTol = 1e-6;

void require_unit_length(const EmbeddingSpace& space, const char* side) {
  const auto res = constraint_residuals(space);
  if (res.max_length_residual > kUnitLengthTol) {
    throw DataError(std::string("rcsls: ") + side +
                    " space is not length-normalized (residual " +
                    std::to_string(res.max_length_residual) + " > 1e-6)");
  }
}

// Gathers the named columns into a dense d x P matrix.
Matrix gather(const Matrix& m, const std::vector<std::pair<int, int>>& pairs,
              bool source_side) {
  Matrix out(m.rows(), static_cast<long>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.col(p) = m.col(source_side ? pairs[p].first : pairs[p].second);
  }
  return out;
}

// Sum of the neighbor columns per pair, d x P.
Matrix neighbor_sums(const Matrix& m, const std::vector<std::vector<int>>& sets) {
  Matrix out = Matrix::Zero(m.rows(), static_cast<long>(sets.size()));
  for (std::size_t p = 0; p < sets.size(); ++p) {
    for (int idx : sets[p]) out.col(p) += m.col(idx);
  }
  return out;
}

}  // namespace

CslsNeighborSets rcsls_neighbor_sets(const Matrix& W, const EmbeddingSpace& src,
                                     const EmbeddingSpace& tgt,
                                     const std::vector<std::pair<int, int>>& pairs,
                                     int knn, int neighbor_pool) {
  if (knn < 1) throw UsageError("rcsls: knn must be >= 1");
  if (neighbor_pool < 1) throw UsageError("rcsls: neighbor_pool must be >= 1");
  const long pool_s = std::min<long>(neighbor_pool, src.size());
  const long pool_t = std::min<long>(neighbor_pool, tgt.size());
  const long P = static_cast<long>(pairs.size());

  CslsNeighborSets sets;
  sets.target_neighbors.resize(P);
  sets.source_neighbors.resize(P);

  // Neighbors rank by the same dot products the loss sums, so the frozen
  // loss is an upper envelope of linear functions of W.
  const Matrix mapped_sources = W * gather(src.matrix(), pairs, true);  // d x P
  const Matrix wt_targets = W.transpose() * gather(tgt.matrix(), pairs, false);

  const long block = 512;
  detail::parallel_blocks(P, block, [&](long lo, long hi) {
    Matrix st = tgt.matrix().leftCols(pool_t).transpose() *
                mapped_sources.middleCols(lo, hi - lo);  // pool_t x b
    Matrix ss = src.matrix().leftCols(pool_s).transpose() *
                wt_targets.middleCols(lo, hi - lo);  // pool_s x b
    for (long p = lo; p < hi; ++p) {
      detail::top_k_indices(st.col(p - lo).data(), pool_t, knn, -1,
                            sets.target_neighbors[p]);
      detail::top_k_indices(ss.col(p - lo).data(), pool_s, knn, -1,
                            sets.source_neighbors[p]);
    }
  });
  return sets;
}

double rcsls_loss_frozen(const Matrix& W, const EmbeddingSpace& src,
                         const EmbeddingSpace& tgt,
                         const std::vector<std::pair<int, int>>& pairs,
                         const CslsNeighborSets& sets, int knn) {
  if (pairs.empty()) throw DataError("rcsls: empty pair list");
  const long P = static_cast<long>(pairs.size());
  const Matrix xs = gather(src.matrix(), pairs, true);
  const Matrix zs = gather(tgt.matrix(), pairs, false);
  const Matrix nt = neighbor_sums(tgt.matrix(), sets.target_neighbors);
  const Matrix ns = neighbor_sums(src.matrix(), sets.source_neighbors);

  const Matrix wx = W * xs;
  const Matrix wns = W * ns;
  const double term1 = -2.0 * (wx.array() * zs.array()).sum();
  const double term2 = (wx.array() * nt.array()).sum() / knn;
  const double term3 = (wns.array() * zs.array()).sum() / knn;
  return (term1 + term2 + term3) / static_cast<double>(P);
}

// With the sets frozen the loss is linear in W, so its gradient does not
// depend on the evaluation point.
Matrix rcsls_gradient_frozen([[maybe_unused]] const Matrix& W,
                             const EmbeddingSpace& src,
                             const EmbeddingSpace& tgt,
                             const std::vector<std::pair<int, int>>& pairs,
                             const CslsNeighborSets& sets, int knn) {
  if (pairs.empty()) throw DataError("rcsls: empty pair list");
  const double P = static_cast<double>(pairs.size());
  const Matrix xs = gather(src.matrix(), pairs, true);
  const Matrix zs = gather(tgt.matrix(), pairs, false);
  const Matrix nt = neighbor_sums(tgt.matrix(), sets.target_neighbors);
  const Matrix ns = neighbor_sums(src.matrix(), sets.source_neighbors);

  Matrix grad = -2.0 * zs * xs.transpose();
  grad.noalias() += nt * xs.transpose() / knn;
  grad.noalias() += zs * ns.transpose() / knn;
  return grad / P;
}

double rcsls_loss(const Matrix& W, const EmbeddingSpace& src,
                  const EmbeddingSpace& tgt, const SeedDictionary& dict,
                  int knn, int neighbor_pool) {
  require_unit_length(src, "source");
  require_unit_length(tgt, "target");
  const auto pairs = solver_pairs(dict, src.size(), tgt.size());
  const auto sets = rcsls_neighbor_sets(W, src, tgt, pairs, knn, neighbor_pool);
  return rcsls_loss_frozen(W, src, tgt, pairs, sets, knn);
}

RcslsResult rcsls_train(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                        const SeedDictionary& train_dict,
                        const std::optional<SeedDictionary>& valid_dict,
                        const RcslsConfig& cfg) {
  require_unit_length(src, "source");
  require_unit_length(tgt, "target");
  if (cfg.learning_rates.empty()) throw UsageError("rcsls: empty learning-rate grid");
  if (cfg.epoch_candidates.empty()) throw UsageError("rcsls: empty epoch grid");
  if (cfg.batch_size < 1) throw UsageError("rcsls: batch_size must be >= 1");
  for (int e : cfg.epoch_candidates) {
    if (e < 1) throw UsageError("rcsls: epochs must be >= 1");
  }

  std::vector<std::pair<int, int>> train_pairs =
      solver_pairs(train_dict, src.size(), tgt.size());
  std::vector<std::pair<int, int>> valid_pairs;

  if (valid_dict.has_value()) {
    valid_pairs = solver_pairs(*valid_dict, src.size(), tgt.size());
    std::set<std::pair<int, int>> train_set(train_pairs.begin(), train_pairs.end());
    for (const auto& pr : valid_pairs) {
      if (train_set.count(pr)) {
        throw DataError("rcsls: validation pair (" + std::to_string(pr.first) +
                        ", " + std::to_string(pr.second) +
                        ") also appears in the training dictionary");
      }
    }
  } else {
    if (static_cast<long>(train_pairs.size()) <= cfg.holdout) {
      throw DataError("rcsls: training dictionary has " +
                      std::to_string(train_pairs.size()) +
                      " pairs, too few to hold out " +
                      std::to_string(cfg.holdout) +
                      " for validation; supply a validation dictionary");
    }
    Rng rng(cfg.seed);
    rng.shuffle(train_pairs);
    valid_pairs.assign(train_pairs.begin(), train_pairs.begin() + cfg.holdout);
    train_pairs.erase(train_pairs.begin(), train_pairs.begin() + cfg.holdout);
  }

  SeedDictionary effective_train;
  effective_train.pairs = train_pairs;
  const LinearMap w0 = procrustes_fit(src, tgt, effective_train);

  MultiDictionary valid_multi;
  for (const auto& [i, j] : valid_pairs) valid_multi.entries[i].insert(j);

  RetrievalOptions valid_opts;
  valid_opts.criterion = RetrievalCriterion::csls(cfg.knn);
  valid_opts.penalty_pool = cfg.neighbor_pool;

  RcslsResult result;
  bool have_winner = false;

  for (double lr : cfg.learning_rates) {
    if (lr <= 0.0) throw UsageError("rcsls: learning rates must be positive");
    for (int epochs : cfg.epoch_candidates) {
      RcslsGridPoint point;
      point.learning_rate = lr;
      point.epochs = epochs;

      Matrix w = w0.matrix;
      double step = lr;
      std::vector<double> trace;
      trace.reserve(epochs + 1);
      auto full_loss = [&](const Matrix& probe) {
        const auto sets = rcsls_neighbor_sets(probe, src, tgt, train_pairs,
                                              cfg.knn, cfg.neighbor_pool);
        return rcsls_loss_frozen(probe, src, tgt, train_pairs, sets, cfg.knn);
      };
      double best_loss = full_loss(w);
      trace.push_back(best_loss);

      // Every grid point replays the same seeded batch sequence, so
      // (lr, 10) is a prefix of (lr, 20).
      Rng rng(cfg.seed);
      std::vector<std::pair<int, int>> order = train_pairs;
      for (int epoch = 0; epoch < epochs && !point.diverged; ++epoch) {
        const Matrix checkpoint = w;
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += cfg.batch_size) {
          const std::size_t stop =
              std::min(order.size(), start + cfg.batch_size);
          std::vector<std::pair<int, int>> batch(order.begin() + start,
                                                 order.begin() + stop);
          const auto sets =
              rcsls_neighbor_sets(w, src, tgt, batch, cfg.knn, cfg.neighbor_pool);
          const Matrix grad =
              rcsls_gradient_frozen(w, src, tgt, batch, sets, cfg.knn);
          w.noalias() -= step * grad;
        }
        if (!w.allFinite()) {
          point.diverged = true;
          break;
        }
        const double loss = full_loss(w);
        if (!std::isfinite(loss)) {
          point.diverged = true;
          break;
        }
        // The reference optimizer's backtracking: a worse epoch is rolled
        // back and retried at half the step. This is what lets the large
        // grid rates contribute instead of destroying the map.
        if (loss > best_loss) {
          step /= 2.0;
          w = checkpoint;
          trace.push_back(best_loss);
        } else {
          best_loss = loss;
          trace.push_back(loss);
        }
      }

      if (!point.diverged) {
        LinearMap candidate;
        candidate.matrix = w;
        candidate.orthogonal = false;
        candidate.orthogonality_residual =
            (w.transpose() * w - Matrix::Identity(w.cols(), w.cols())).norm();
        const EvaluationReport report =
            evaluate_p1(candidate, src, tgt, valid_multi, valid_opts);
        point.validation_p1 = report.accuracy;
        if (!have_winner || point.validation_p1 > result.validation_p1) {
          have_winner = true;
          result.map = std::move(candidate);
          result.learning_rate = lr;
          result.epochs = epochs;
          result.validation_p1 = point.validation_p1;
          result.loss_trace = trace;
        }
      }
      result.grid.push_back(point);
    }
  }

  if (!have_winner) {
    throw NumericError("rcsls: every grid point diverged");
  }
  return result;
}

}  // namespace xlign
