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

#include "xlign/normalize.hpp"

#include <cmath>

#include "xlign/errors.hpp"
#include "xlign/rng.hpp"

namespace xlign {

namespace {

constexpr unsigned long long kPerturbSeed = 0x5851F42D4C957F2DULL;

// Replaces zero columns with uniform noise of magnitude
// 1e-6 * (mean column length); deterministic. Returns how many columns
// were touched.
int perturb_zero_columns(Matrix& m) {
  const Eigen::VectorXd lengths = m.colwise().norm();
  double mean_len = lengths.mean();
  if (mean_len <= 0.0) mean_len = 1.0;  // all-zero matrix still gets noise
  const double mag = 1e-6 * mean_len;
  Rng rng(kPerturbSeed);
  int touched = 0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    if (lengths[i] > 0.0) continue;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      m(k, i) = rng.uniform(-mag, mag);
    }
    ++touched;
  }
  return touched;
}

// Length projection x_i <- x_i / ||x_i||. Throws when a column is zero
// unless perturb_zeros fixes it up first.
void length_project(Matrix& m, const EmbeddingSpace& space, bool perturb_zeros,
                    int round /* 0 = standalone call */) {
  if (perturb_zeros) perturb_zero_columns(m);
  Eigen::VectorXd lengths = m.colwise().norm();
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    if (lengths[i] == 0.0) {
      std::string where = round > 0 ? "round " + std::to_string(round) + ", " : "";
      throw NumericError("length normalization: " + where + "word " +
                         std::to_string(i) + " ('" +
                         space.word(static_cast<int>(i)) +
                         "') has a zero vector");
    }
  }
  m.array().rowwise() /= lengths.transpose().array();
}

void center_project(Matrix& m) {
  const Eigen::VectorXd mean = m.rowwise().mean();
  m.colwise() -= mean;
}

}  // namespace

NormalizationMethod NormalizationMethod::iter_norm(int rounds, double tolerance) {
  if (rounds < 1) throw UsageError("iternorm: rounds must be >= 1");
  if (tolerance < 0.0) throw UsageError("iternorm: tolerance must be >= 0");
  return {Kind::IterNorm, rounds, tolerance};
}

NormalizationMethod NormalizationMethod::parse(const std::string& name,
                                               int rounds, double tolerance) {
  if (name == "none") return none();
  if (name == "cl") return center_then_length();
  if (name == "iternorm") return iter_norm(rounds, tolerance);
  throw UsageError("unknown normalization method '" + name +
                   "' (expected none, cl or iternorm)");
}

std::string NormalizationMethod::name() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::CenterThenLength: return "cl";
    case Kind::IterNorm: return "iternorm";
  }
  return "none";
}

EmbeddingSpace length_normalize(const EmbeddingSpace& space, bool perturb_zeros) {
  Matrix m = space.matrix();
  length_project(m, space, perturb_zeros, 0);
  return space.with_matrix(std::move(m));
}

EmbeddingSpace mean_center(const EmbeddingSpace& space) {
  Matrix m = space.matrix();
  center_project(m);
  return space.with_matrix(std::move(m));
}

EmbeddingSpace center_then_length(const EmbeddingSpace& space, bool perturb_zeros) {
  Matrix m = space.matrix();
  center_project(m);
  length_project(m, space, perturb_zeros, 0);
  return space.with_matrix(std::move(m));
}

std::pair<EmbeddingSpace, NormalizationReport> iterative_normalize(
    const EmbeddingSpace& space, const IterNormOptions& opts) {
  if (opts.rounds < 1) throw UsageError("iternorm: rounds must be >= 1");
  if (opts.tolerance < 0.0) throw UsageError("iternorm: tolerance must be >= 0");

  Matrix x = space.matrix();
  Matrix prev = x;
  NormalizationReport report;
  report.rounds.reserve(opts.rounds);

  for (int k = 1; k <= opts.rounds; ++k) {
    length_project(x, space, opts.perturb_zeros, k);
    center_project(x);

    NormalizationRound rec;
    rec.round = k;
    const Eigen::VectorXd lengths = x.colwise().norm();
    rec.max_length_residual = (lengths.array() - 1.0).abs().maxCoeff();
    rec.mean_norm_residual = x.rowwise().mean().norm();
    rec.iterate_delta = (x - prev).norm();
    rec.min_column_length = lengths.minCoeff();
    report.rounds.push_back(rec);
    prev = x;

    if (rec.max_length_residual <= opts.tolerance &&
        rec.mean_norm_residual <= opts.tolerance) {
      report.converged = true;
      break;
    }
  }
  return {space.with_matrix(std::move(x)), std::move(report)};
}

ConstraintResiduals constraint_residuals(const Matrix& matrix) {
  ConstraintResiduals out;
  const Eigen::VectorXd lengths = matrix.colwise().norm();
  out.max_length_residual = (lengths.array() - 1.0).abs().maxCoeff();
  out.mean_norm_residual = matrix.rowwise().mean().norm();
  out.min_column_length = lengths.minCoeff();
  return out;
}

ConstraintResiduals constraint_residuals(const EmbeddingSpace& space) {
  return constraint_residuals(space.matrix());
}

double mean_vector_length(const EmbeddingSpace& space) {
  return space.matrix().rowwise().mean().norm();
}

std::pair<EmbeddingSpace, std::optional<NormalizationReport>> normalize_with(
    const EmbeddingSpace& space, const NormalizationMethod& method,
    bool perturb_zeros) {
  switch (method.kind) {
    case NormalizationMethod::Kind::None:
      return {space, std::nullopt};
    case NormalizationMethod::Kind::CenterThenLength:
      return {center_then_length(space, perturb_zeros), std::nullopt};
    case NormalizationMethod::Kind::IterNorm: {
      IterNormOptions opts;
      opts.rounds = method.rounds;
      opts.tolerance = method.tolerance;
      opts.perturb_zeros = perturb_zeros;
      auto [out, report] = iterative_normalize(space, opts);
      return {std::move(out), std::move(report)};
    }
  }
  return {space, std::nullopt};
}

}  // namespace xlign
