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

#ifndef XLIGN_NORMALIZE_HPP
#define XLIGN_NORMALIZE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xlign/embedding_space.hpp"

namespace xlign {

// Per-round measurements taken on the round's output matrix X(k). The
// centering step runs last within a round, so mean_norm_residual is zero
// up to rounding while max_length_residual shrinks as rounds proceed.
// min_column_length is the quantity whose positivity each round keeps the
// alternation well defined.
struct NormalizationRound {
  int round = 0;
  double max_length_residual = 0.0;  // max_i | ||x_i|| - 1 |
  double mean_norm_residual = 0.0;   // || (1/n) sum_i x_i ||
  double iterate_delta = 0.0;        // || X(k) - X(k-1) ||_F
  double min_column_length = 0.0;    // min_i ||x_i||, before the next length step
};

struct NormalizationReport {
  std::vector<NormalizationRound> rounds;
  bool converged = false;
};

struct NormalizationMethod {
  enum class Kind { None, CenterThenLength, IterNorm };
  Kind kind = Kind::None;
  int rounds = 5;
  double tolerance = 0.0;

  static NormalizationMethod none() { return {Kind::None, 0, 0.0}; }
  static NormalizationMethod center_then_length() {
    return {Kind::CenterThenLength, 1, 0.0};
  }
  static NormalizationMethod iter_norm(int rounds = 5, double tolerance = 0.0);

  // "none" | "cl" | "iternorm"; throws UsageError otherwise.
  static NormalizationMethod parse(const std::string& name, int rounds = 5,
                                   double tolerance = 0.0);
  std::string name() const;
};

struct IterNormOptions {
  int rounds = 5;
  double tolerance = 0.0;  // 0 = run the full round budget
  // Replace any zero column with deterministic uniform noise of magnitude
  // 1e-6 * (mean column length) instead of failing.
  bool perturb_zeros = false;
};

// Scales every column to unit length; direction preserved. Throws
// NumericError naming the word when a column is zero.
EmbeddingSpace length_normalize(const EmbeddingSpace& space,
                                bool perturb_zeros = false);

// Subtracts the mean vector from every column; pairwise differences
// unchanged.
EmbeddingSpace mean_center(const EmbeddingSpace& space);

// One round of mean centering followed by length normalization. The
// output is exactly unit length but its mean is generally nonzero again.
EmbeddingSpace center_then_length(const EmbeddingSpace& space,
                                  bool perturb_zeros = false);

// Alternating projection onto the unit-length and zero-mean sets: each
// round scales columns to unit length, then centers. Stops early once
// both residuals fall within opts.tolerance. Throws NumericError naming
// the round and word when a zero column appears (unless perturb_zeros).
std::pair<EmbeddingSpace, NormalizationReport> iterative_normalize(
    const EmbeddingSpace& space, const IterNormOptions& opts = {});

struct ConstraintResiduals {
  double max_length_residual = 0.0;
  double mean_norm_residual = 0.0;
  double min_column_length = 0.0;
};

// Pure measurement of how far a space is from the two constraints.
ConstraintResiduals constraint_residuals(const EmbeddingSpace& space);
ConstraintResiduals constraint_residuals(const Matrix& matrix);

// || (1/n) sum_i x_i ||_2 — the center magnitude an orthogonal map must
// preserve.
double mean_vector_length(const EmbeddingSpace& space);

// Dispatch by method; the report is present only for IterNorm.
std::pair<EmbeddingSpace, std::optional<NormalizationReport>> normalize_with(
    const EmbeddingSpace& space, const NormalizationMethod& method,
    bool perturb_zeros = false);

}  // namespace xlign

#endif  // XLIGN_NORMALIZE_HPP
