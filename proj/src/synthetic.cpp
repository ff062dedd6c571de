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

#include "xlign/synthetic.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "xlign/errors.hpp"
#include "xlign/rng.hpp"

namespace xlign {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.n < 2) throw UsageError("synthetic: n must be >= 2");
  if (spec.d < 2) throw UsageError("synthetic: d must be >= 2");
  if (spec.noise_sigma < 0.0) throw UsageError("synthetic: noise_sigma must be >= 0");
  if (spec.length_scale_min <= 0.0 ||
      spec.length_scale_max < spec.length_scale_min) {
    throw UsageError("synthetic: length scales must satisfy 0 < min <= max");
  }
  if (spec.mean_offset.size() != 0 && spec.mean_offset.size() != spec.d) {
    throw UsageError("synthetic: mean_offset must have dimension d or be empty");
  }
  if (spec.train_pairs < 1 || spec.test_pairs < 1 ||
      spec.train_pairs + spec.test_pairs > spec.n) {
    throw UsageError("synthetic: train_pairs + test_pairs must fit in n");
  }
  if (spec.spectrum_decay < 0.0) {
    throw UsageError("synthetic: spectrum_decay must be >= 0");
  }
}

std::vector<std::string> numbered_vocab(const char* prefix, int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

Vector offset_with_norm(int d, double norm, unsigned long long seed) {
  if (d < 1) throw UsageError("offset_with_norm: d must be >= 1");
  if (norm < 0.0) throw UsageError("offset_with_norm: norm must be >= 0");
  if (norm == 0.0) return Vector::Zero(d);
  Rng rng(seed ^ 0xA0F5E7D3C2B19ULL);  // decorrelate from the base draws
  Vector v(d);
  double len = 0.0;
  while (len == 0.0) {
    for (int k = 0; k < d; ++k) v[k] = rng.gaussian();
    len = v.norm();
  }
  return v * (norm / len);
}

SyntheticWorld generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const int n = spec.n;
  const int d = spec.d;

  // Power-law covariance spectrum, unit trace. A flat spectrum keeps
  // every word far from every other in moderate dimension and retrieval
  // never errs; decaying variances give words close neighbors the way
  // real embeddings do.
  Vector scale_axes(d);
  for (int k = 0; k < d; ++k) {
    scale_axes[k] = std::pow(static_cast<double>(k + 1), -spec.spectrum_decay);
  }
  scale_axes /= scale_axes.sum();
  scale_axes = scale_axes.cwiseSqrt();

  Matrix base(d, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) base(k, i) = scale_axes[k] * rng.gaussian();
  }

  // Ground-truth rotation from the QR of a Gaussian matrix, signs fixed
  // so the factorization is unique.
  Matrix g(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) g(r, c) = rng.gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix rotation = qr.householderQ();
  const Matrix r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    if (r_factor(k, k) < 0.0) rotation.col(k) = -rotation.col(k);
  }

  Matrix tgt_matrix = rotation * base;
  if (spec.noise_sigma > 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) {
        tgt_matrix(k, i) += spec.noise_sigma * rng.gaussian();
      }
    }
  }

  // Source-side distortion: shared mean offset, then per-column length
  // scales. Scaling after the offset means one length projection removes
  // the scales entirely; recovering the offset takes the full alternation.
  Matrix src_matrix = base;
  if (spec.mean_offset.size() == d) {
    src_matrix.colwise() += spec.mean_offset;
  }
  for (int i = 0; i < n; ++i) {
    src_matrix.col(i) *= rng.uniform(spec.length_scale_min, spec.length_scale_max);
  }

  SyntheticWorld world;
  world.src = EmbeddingSpace(numbered_vocab("s", n), std::move(src_matrix));
  world.tgt = EmbeddingSpace(numbered_vocab("t", n), std::move(tgt_matrix));
  world.rotation = std::move(rotation);

  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  rng.shuffle(indices);
  std::vector<int> train(indices.begin(), indices.begin() + spec.train_pairs);
  std::vector<int> test(indices.begin() + spec.train_pairs,
                        indices.begin() + spec.train_pairs + spec.test_pairs);
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  for (int i : train) world.train_dict.pairs.emplace_back(i, i);
  for (int i : test) {
    world.test_dict.pairs.emplace_back(i, i);
    world.test_multi.entries[i].insert(i);
  }
  return world;
}

}  // namespace xlign
