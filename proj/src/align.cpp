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

#include "xlign/align.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "dense_topk.hpp"
#include "xlign/errors.hpp"

namespace xlign {

namespace {

constexpr double kOrthogonalTol = 1e-8;

double orthogonality_residual_of(const Matrix& w) {
  return (w.transpose() * w - Matrix::Identity(w.cols(), w.cols())).norm();
}

}  // namespace

LinearMap procrustes_fit(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const SeedDictionary& dict) {
  if (src.dim() != tgt.dim()) {
    throw DataError("procrustes: dimension mismatch (" +
                    std::to_string(src.dim()) + " vs " +
                    std::to_string(tgt.dim()) + ")");
  }
  const auto pairs = solver_pairs(dict, src.size(), tgt.size());
  const int d = src.dim();

  // Cross-covariance of the dictionary columns: M = Z_D X_D^T.
  Matrix m = Matrix::Zero(d, d);
  for (const auto& [i, j] : pairs) {
    m.noalias() += tgt.matrix().col(j) * src.matrix().col(i).transpose();
  }
  if (!m.allFinite()) {
    throw NumericError("procrustes: cross-covariance is not finite");
  }

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU() * svd.matrixV().transpose();

  const Matrix reconstructed =
      svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  if ((reconstructed - m).norm() > 1e-8 * m.norm() + 1e-12) {
    throw NumericError("procrustes: SVD reconstruction error too large");
  }

  LinearMap out;
  out.matrix = w;
  out.orthogonality_residual = orthogonality_residual_of(w);
  out.orthogonal = out.orthogonality_residual <= kOrthogonalTol;
  if (!out.orthogonal) {
    throw NumericError("procrustes: result failed the orthogonality check");
  }
  return out;
}

double objective_value(const LinearMap& map, const EmbeddingSpace& src,
                       const EmbeddingSpace& tgt, const SeedDictionary& dict) {
  const auto pairs = solver_pairs(dict, src.size(), tgt.size());
  double total = 0.0;
  for (const auto& [i, j] : pairs) {
    total += (map.matrix * src.matrix().col(i) - tgt.matrix().col(j)).squaredNorm();
  }
  return total;
}

SeedDictionary build_synthetic_dictionary(const LinearMap& map,
                                          const EmbeddingSpace& src,
                                          const EmbeddingSpace& tgt,
                                          const RefineConfig& cfg) {
  if (cfg.knn < 1) throw UsageError("refine: knn must be >= 1");
  if (cfg.synthetic_pool < 1) throw UsageError("refine: synthetic_pool must be >= 1");
  const long ps = std::min<long>(cfg.synthetic_pool, src.size());
  const long pt = std::min<long>(cfg.synthetic_pool, tgt.size());

  const Matrix mapped = detail::unit_columns(map.matrix * src.matrix().leftCols(ps));
  const Matrix tgt_unit = detail::unit_columns(tgt.matrix().leftCols(pt));

  const long block = 512;
  const Vector r_src = detail::knn_mean_all(mapped, tgt_unit, cfg.knn, block);
  const Vector r_tgt = detail::knn_mean_all(tgt_unit, mapped, cfg.knn, block);

  // forward[i]: CSLS argmax over targets; backward[j]: over sources.
  // Blocks ascend in i, so strict improvement keeps the smallest index on
  // ties for backward; forward ties resolve by scan order.
  std::vector<int> forward(ps, -1);
  std::vector<int> backward(pt, -1);
  std::vector<double> backward_best(pt, -std::numeric_limits<double>::infinity());
  for (long lo = 0; lo < ps; lo += block) {
    const long hi = std::min(ps, lo + block);
    Matrix s = tgt_unit.transpose() * mapped.middleCols(lo, hi - lo);  // pt x b
    for (long i = lo; i < hi; ++i) {
      const double* col = s.col(i - lo).data();
      double best = -std::numeric_limits<double>::infinity();
      int best_j = -1;
      for (long j = 0; j < pt; ++j) {
        const double v = 2.0 * col[j] - r_tgt[j];  // r_src[i] constant per i
        if (v > best) {
          best = v;
          best_j = static_cast<int>(j);
        }
        const double bw = 2.0 * col[j] - r_src[i];
        if (bw > backward_best[j]) {
          backward_best[j] = bw;
          backward[j] = static_cast<int>(i);
        }
      }
      forward[i] = best_j;
    }
  }

  SeedDictionary out;
  for (long i = 0; i < ps; ++i) {
    const int j = forward[i];
    if (j >= 0 && backward[j] == static_cast<int>(i)) {
      out.pairs.emplace_back(static_cast<int>(i), j);
    }
  }
  if (out.pairs.empty()) {
    throw DataError("refine: no mutual CSLS nearest neighbors (alignment collapse)");
  }
  return out;
}

RefineResult refine(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                    const SeedDictionary& seed_dict, const RefineConfig& cfg) {
  if (cfg.steps < 1) throw UsageError("refine: steps must be >= 1");
  RefineResult out;
  out.map = procrustes_fit(src, tgt, seed_dict);
  for (int step = 1; step <= cfg.steps; ++step) {
    SeedDictionary synthetic;
    try {
      synthetic = build_synthetic_dictionary(out.map, src, tgt, cfg);
    } catch (const DataError& e) {
      out.stopped_early = true;
      out.warning = "step " + std::to_string(step) + ": " + e.what() +
                    "; keeping the previous map";
      break;
    }
    out.dictionary_sizes.push_back(static_cast<long>(synthetic.size()));
    out.map = procrustes_fit(src, tgt, synthetic);
  }
  return out;
}

void write_map(const LinearMap& map, std::ostream& out) {
  const int d = map.dim();
  out << d << ' ' << (map.orthogonal ? 1 : 0) << '\n';
  char buf[32];
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", map.matrix(r, c));
      out << buf << (c + 1 == d ? '\n' : ' ');
    }
  }
  if (!out) throw IoError("write failed while emitting map");
}

void write_map_file(const LinearMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_map(map, out);
}

LinearMap read_map(std::istream& in) {
  int d = 0;
  int flag = 0;
  if (!(in >> d >> flag) || d < 1 || (flag != 0 && flag != 1)) {
    throw DataError("map: malformed header, expected 'd orthogonal_flag'");
  }
  LinearMap out;
  out.matrix.resize(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (!(in >> out.matrix(r, c))) {
        throw DataError("map: truncated matrix at row " + std::to_string(r));
      }
    }
  }
  if (!out.matrix.allFinite()) throw DataError("map: non-finite entry");
  out.orthogonality_residual = orthogonality_residual_of(out.matrix);
  out.orthogonal = flag == 1;
  if (out.orthogonal && out.orthogonality_residual > kOrthogonalTol) {
    throw DataError("map: tagged orthogonal but ||W'W - I||_F = " +
                    std::to_string(out.orthogonality_residual));
  }
  return out;
}

LinearMap read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return read_map(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace xlign
