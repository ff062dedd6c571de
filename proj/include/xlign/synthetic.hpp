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

#ifndef XLIGN_SYNTHETIC_HPP
#define XLIGN_SYNTHETIC_HPP

#include "xlign/embedding_space.hpp"

namespace xlign {

// Paired-language test world with a known ground-truth rotation.
//
// A clean anisotropic Gaussian base X (power-law covariance spectrum, so
// words have close neighbors the way real embeddings do) produces the
// target Z = Q X + noise. The source side is X distorted by a shared mean
// offset and per-column length scales, x_i = s_i (x_i + m), which breaks
// the isomorphism an orthogonal map needs; normalization is what repairs
// it. Dictionaries are disjoint splits of the identity pairing.
struct SyntheticSpec {
  int n = 2000;
  int d = 50;
  double noise_sigma = 0.05;
  Vector mean_offset;            // empty = zero offset
  double length_scale_min = 1.0; // per-column scales ~ U[min, max]
  double length_scale_max = 1.0;
  unsigned long long seed = 0;
  int train_pairs = 500;
  int test_pairs = 500;
  // Covariance spectrum of the base Gaussian: eigenvalue_k ~ k^-decay,
  // normalized to unit trace.
  double spectrum_decay = 2.0;
};

struct SyntheticWorld {
  EmbeddingSpace src;
  EmbeddingSpace tgt;
  SeedDictionary train_dict;
  SeedDictionary test_dict;
  MultiDictionary test_multi;
  Matrix rotation;  // the ground-truth orthogonal Q
};

// Deterministic in spec.seed. Throws UsageError on an invalid spec
// (n < 2, d < 2, negative sigma, overlapping splits that exceed n, ...).
SyntheticWorld generate_synthetic(const SyntheticSpec& spec);

// Seeded random direction scaled to the requested norm.
Vector offset_with_norm(int d, double norm, unsigned long long seed);

}  // namespace xlign

#endif  // XLIGN_SYNTHETIC_HPP
