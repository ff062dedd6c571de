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

#include "xlign/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dense_topk.hpp"
#include "xlign/errors.hpp"

namespace xlign {

RetrievalCriterion RetrievalCriterion::parse(const std::string& name, int knn) {
  if (name == "nn") return nearest_neighbor();
  if (name == "csls") {
    if (knn < 1) throw UsageError("csls: knn must be >= 1");
    return csls(knn);
  }
  throw UsageError("unknown retrieval criterion '" + name +
                   "' (expected nn or csls)");
}

std::string RetrievalCriterion::name() const {
  return kind == Kind::NearestNeighbor ? "nn" : "csls";
}

double knn_mean_similarity(const Vector& query, const EmbeddingSpace& pool,
                           int k, int exclude_index) {
  const long effective = pool.size() - (exclude_index >= 0 ? 1 : 0);
  if (k < 1 || k > effective) {
    throw UsageError("knn_mean_similarity: k = " + std::to_string(k) +
                     " out of range for pool of " + std::to_string(effective));
  }
  if (!query.allFinite()) {
    throw DataError("knn_mean_similarity: query has a non-finite entry");
  }
  const double qlen = query.norm();
  Vector q = qlen > 0.0 ? Vector(query / qlen) : query;
  Vector sims = detail::unit_columns(pool.matrix()).transpose() * q;
  std::vector<double> vals;
  vals.reserve(sims.size());
  for (long j = 0; j < sims.size(); ++j) {
    if (j == exclude_index) continue;
    vals.push_back(sims[j]);
  }
  std::nth_element(vals.begin(), vals.begin() + (k - 1), vals.end(),
                   std::greater<double>());
  return std::accumulate(vals.begin(), vals.begin() + k, 0.0) / k;
}

Vector csls_scores(const Vector& mapped_query, const EmbeddingSpace& tgt,
                   double r_query, const Vector& r_targets) {
  if (mapped_query.size() != tgt.dim()) {
    throw DataError("csls_scores: query dimension mismatch");
  }
  if (r_targets.size() != tgt.size()) {
    throw DataError("csls_scores: penalty vector has wrong length");
  }
  const double qlen = mapped_query.norm();
  Vector q = qlen > 0.0 ? Vector(mapped_query / qlen) : mapped_query;
  Vector cos = detail::unit_columns(tgt.matrix()).transpose() * q;
  return 2.0 * cos.array() - r_query - r_targets.array();
}

namespace {

// Shared scoring pass: per query, cosine row against all targets, CSLS
// penalties when asked for, then top-k selection.
std::vector<std::vector<Prediction>> rank_queries(
    const LinearMap& map, const EmbeddingSpace& src, const EmbeddingSpace& tgt,
    const std::vector<int>& query_indices, int topk,
    const RetrievalOptions& opts) {
  if (tgt.size() < 1) throw DataError("translate: empty target space");
  if (topk < 1) throw UsageError("translate: topk must be >= 1");
  for (int q : query_indices) {
    if (q < 0 || q >= src.size()) {
      throw DataError("translate: query index " + std::to_string(q) +
                      " out of range");
    }
  }
  if (map.dim() != src.dim() || map.dim() != tgt.dim()) {
    throw DataError("translate: map dimension mismatch");
  }

  const long nq = static_cast<long>(query_indices.size());
  const long nt = tgt.size();
  const bool use_csls = opts.criterion.kind == RetrievalCriterion::Kind::Csls;
  const int knn = std::min<int>(std::max(1, opts.criterion.knn),
                                static_cast<int>(nt));
  const long block = opts.block_size > 0 ? opts.block_size : 512;

  const Matrix tgt_unit = detail::unit_columns(tgt.matrix());

  Matrix mapped_queries(src.dim(), nq);
  for (long q = 0; q < nq; ++q) {
    mapped_queries.col(q) = map.matrix * src.matrix().col(query_indices[q]);
  }
  const Matrix query_unit = detail::unit_columns(mapped_queries);

  Vector r_targets;
  long tgt_pool = nt;
  if (use_csls) {
    const long src_pool = opts.penalty_pool > 0
                              ? std::min<long>(opts.penalty_pool, src.size())
                              : src.size();
    tgt_pool = opts.penalty_pool > 0 ? std::min<long>(opts.penalty_pool, nt) : nt;
    const Matrix mapped_pool =
        detail::unit_columns(map.matrix * src.matrix().leftCols(src_pool));
    const int k_src = std::min<int>(knn, static_cast<int>(src_pool));
    r_targets = detail::knn_mean_all(tgt_unit, mapped_pool, k_src, block);
  }

  std::vector<std::vector<Prediction>> out(nq);
  detail::parallel_blocks(nq, block, [&](long lo, long hi) {
    Matrix s = tgt_unit.transpose() * query_unit.middleCols(lo, hi - lo);  // nt x b
    std::vector<double> scratch;
    std::vector<int> order;
    Vector scores(nt);
    for (long q = lo; q < hi; ++q) {
      const double* cos = s.col(q - lo).data();
      if (use_csls) {
        const int k_tgt = std::min<int>(knn, static_cast<int>(tgt_pool));
        const double r_query = detail::mean_top_k(cos, tgt_pool, k_tgt, scratch);
        for (long j = 0; j < nt; ++j) {
          scores[j] = 2.0 * cos[j] - r_query - r_targets[j];
        }
      } else {
        for (long j = 0; j < nt; ++j) scores[j] = cos[j];
      }
      detail::top_k_indices(scores.data(), nt, topk, -1, order);
      auto& preds = out[q];
      preds.reserve(order.size());
      for (int j : order) preds.push_back({j, scores[j]});
    }
  });
  return out;
}

}  // namespace

std::vector<std::vector<Prediction>> translate_topk(
    const LinearMap& map, const EmbeddingSpace& src, const EmbeddingSpace& tgt,
    const std::vector<int>& query_indices, int topk,
    const RetrievalOptions& opts) {
  return rank_queries(map, src, tgt, query_indices, topk, opts);
}

EvaluationReport evaluate_p1(const LinearMap& map, const EmbeddingSpace& src,
                             const EmbeddingSpace& tgt,
                             const MultiDictionary& test,
                             const RetrievalOptions& opts) {
  if (test.empty()) throw DataError("evaluate: empty test dictionary");
  std::vector<int> queries;
  queries.reserve(test.size());
  for (const auto& [i, targets] : test.entries) {
    if (targets.empty()) throw DataError("evaluate: empty target set for query");
    queries.push_back(i);
  }

  const auto ranked = rank_queries(map, src, tgt, queries, 1, opts);

  EvaluationReport report;
  report.criterion = opts.criterion.name();
  report.total_queries = static_cast<long>(queries.size());
  report.predictions.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& preds = ranked[q];
    const auto& accepted = test.entries.at(queries[q]);
    EvaluationReport::Entry entry;
    entry.source = src.word(queries[q]);
    entry.predicted = tgt.word(preds.front().target_index);
    entry.score = preds.front().score;
    entry.correct = accepted.count(preds.front().target_index) > 0;
    if (entry.correct) ++report.correct;
    report.predictions.push_back(std::move(entry));
  }
  report.accuracy =
      static_cast<double>(report.correct) / static_cast<double>(report.total_queries);
  return report;
}

namespace {

// Average ranks (1-based), ties share the mean rank of their run.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) {
    throw NumericError("spearman: zero-variance ranks");
  }
  return num / std::sqrt(va * vb);
}

}  // namespace

SpearmanResult spearman_wordsim(const EmbeddingSpace& space,
                                const SimilarityDataset& dataset) {
  if (dataset.items.empty()) throw DataError("spearman: empty dataset");
  std::vector<double> cosines;
  std::vector<double> human;
  SpearmanResult out;
  for (const auto& item : dataset.items) {
    const int a = space.index_of(item.word_a);
    const int b = space.index_of(item.word_b);
    if (a < 0 || b < 0) {
      ++out.skipped_pairs;
      continue;
    }
    Vector va = space.column(a);
    Vector vb = space.column(b);
    const double na = va.norm();
    const double nb = vb.norm();
    cosines.push_back(na > 0.0 && nb > 0.0 ? va.dot(vb) / (na * nb) : 0.0);
    human.push_back(item.human_score);
  }
  out.covered_pairs = static_cast<long>(cosines.size());
  if (out.covered_pairs == 0) {
    throw DataError("spearman: no dataset pair is covered by the vocabulary");
  }
  out.rho = pearson(average_ranks(cosines), average_ranks(human));
  return out;
}

std::vector<NeighborEntry> neighborhood(const EmbeddingSpace& space,
                                        const std::string& word, int k) {
  const int idx = space.index_of(word);
  if (idx < 0) throw DataError("neighbors: word '" + word + "' not in vocabulary");
  if (k < 1) throw UsageError("neighbors: k must be >= 1");
  const Matrix unit = detail::unit_columns(space.matrix());
  Vector sims = unit.transpose() * unit.col(idx);
  std::vector<int> order;
  detail::top_k_indices(sims.data(), space.size(), k, idx, order);
  std::vector<NeighborEntry> out;
  out.reserve(order.size());
  for (int j : order) out.push_back({space.word(j), sims[j]});
  return out;
}

NeighborhoodReport neighborhood_report(const EmbeddingSpace& space_a,
                                       const EmbeddingSpace& space_b,
                                       const std::string& word_a,
                                       const std::string& word_b, int k) {
  NeighborhoodReport report;
  report.word_a = word_a;
  report.word_b = word_b;
  report.neighbors_a = neighborhood(space_a, word_a, k);
  report.neighbors_b = neighborhood(space_b, word_b, k);
  return report;
}

}  // namespace xlign
