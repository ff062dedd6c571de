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

// Internal blocked similarity / top-k helpers shared by retrieval,
// refinement and RCSLS. Blocks bound the score-matrix footprint; blocks
// run in parallel but every output slot has exactly one writer, so
// results do not depend on the worker count.

#ifndef XLIGN_SRC_DENSE_TOPK_HPP
#define XLIGN_SRC_DENSE_TOPK_HPP

#include <algorithm>
#include <thread>
#include <vector>

#include "xlign/embedding_space.hpp"

namespace xlign::detail {

inline Matrix unit_columns(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.cols(); ++i) {
    const double len = out.col(i).norm();
    if (len > 0.0) out.col(i) /= len;
  }
  return out;
}

// Runs fn(lo, hi) over [0, n) in chunks of `block`, using up to the
// hardware thread count. fn must only write state owned by its range.
template <typename Fn>
void parallel_blocks(long n, long block, Fn&& fn) {
  if (n <= 0) return;
  if (block < 1) block = n;
  const long nblocks = (n + block - 1) / block;
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(std::min<long>(workers, nblocks));
  if (workers <= 1) {
    for (long b = 0; b < nblocks; ++b) {
      fn(b * block, std::min(n, (b + 1) * block));
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long b = w; b < nblocks; b += workers) {
        fn(b * block, std::min(n, (b + 1) * block));
      }
    });
  }
  for (auto& t : pool) t.join();
}

// Mean of the k largest entries of scores[0..n). Ties across the k-th
// place are interchangeable for a mean. k is clamped to n.
inline double mean_top_k(const double* scores, long n, int k,
                         std::vector<double>& scratch) {
  const long kk = std::min<long>(k, n);
  scratch.assign(scores, scores + n);
  std::nth_element(scratch.begin(), scratch.begin() + (kk - 1), scratch.end(),
                   std::greater<double>());
  double sum = 0.0;
  for (long i = 0; i < kk; ++i) sum += scratch[i];
  return sum / static_cast<double>(kk);
}

// Indices of the k largest entries, descending score, ties toward the
// smaller index. skip (if >= 0) is excluded.
inline void top_k_indices(const double* scores, long n, int k, int skip,
                          std::vector<int>& out) {
  out.clear();
  for (long j = 0; j < n; ++j) {
    if (j == skip) continue;
    out.push_back(static_cast<int>(j));
  }
  const std::size_t kk = std::min<std::size_t>(k, out.size());
  std::partial_sort(out.begin(), out.begin() + kk, out.end(),
                    [scores](int a, int b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  out.resize(kk);
}

// For each column of queries_unit: mean cosine to its k nearest pool
// columns. Both inputs must already have unit columns. Score blocks are
// shaped pool x queries so each query's scores stay contiguous.
inline Vector knn_mean_all(const Matrix& queries_unit, const Matrix& pool_unit,
                           int k, long block) {
  const long nq = queries_unit.cols();
  Vector out(nq);
  parallel_blocks(nq, block, [&](long lo, long hi) {
    Matrix s = pool_unit.transpose() * queries_unit.middleCols(lo, hi - lo);
    std::vector<double> scratch;
    for (long q = lo; q < hi; ++q) {
      out[q] = mean_top_k(s.col(q - lo).data(), pool_unit.cols(), k, scratch);
    }
  });
  return out;
}

}  // namespace xlign::detail

#endif  // XLIGN_SRC_DENSE_TOPK_HPP
