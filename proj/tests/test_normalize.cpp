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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "xlign/errors.hpp"
#include "xlign/normalize.hpp"

using namespace xlign;

namespace {

EmbeddingSpace from_columns(std::initializer_list<std::pair<double, double>> cols) {
  Matrix m(2, static_cast<long>(cols.size()));
  int i = 0;
  for (const auto& [x, y] : cols) {
    m(0, i) = x;
    m(1, i) = y;
    ++i;
  }
  return oracle::make_space(std::move(m));
}

}  // namespace

TEST_SUITE("normalize") {

TEST_CASE("length_normalize scales the 3-4-5 column") {
  const EmbeddingSpace out = length_normalize(from_columns({{3, 4}}));
  CHECK(out.matrix()(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(out.matrix()(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("length_normalize rejects a zero column, names the word") {
  CHECK_THROWS_WITH_AS(length_normalize(from_columns({{1, 1}, {0, 0}})),
                       doctest::Contains("w1"), NumericError);
}

TEST_CASE("length_normalize: random matrix ends unit length, directions kept") {
  const Matrix m = oracle::gaussian(20, 50, 11);
  const EmbeddingSpace space = oracle::make_space(m);
  const EmbeddingSpace out = length_normalize(space);
  for (int i = 0; i < out.size(); ++i) {
    double len = 0.0;
    for (int k = 0; k < out.dim(); ++k) len += out.matrix()(k, i) * out.matrix()(k, i);
    CHECK(std::abs(std::sqrt(len) - 1.0) <= 1e-12);
    CHECK(oracle::cosine(m, i, out.matrix(), i) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mean_center examples") {
  SUBCASE("already centered input is unchanged") {
    const EmbeddingSpace out = mean_center(from_columns({{1, 0}, {-1, 0}}));
    CHECK(out.matrix()(0, 0) == 1.0);
    CHECK(out.matrix()(0, 1) == -1.0);
  }
  SUBCASE("shifts {(2,0),(0,0)} to {(1,0),(-1,0)}") {
    const EmbeddingSpace out = mean_center(from_columns({{2, 0}, {0, 0}}));
    CHECK(out.matrix()(0, 0) == doctest::Approx(1.0));
    CHECK(out.matrix()(0, 1) == doctest::Approx(-1.0));
    CHECK(out.matrix()(1, 0) == 0.0);
  }
}

TEST_CASE("mean_center: zero mean, pairwise differences preserved") {
  const Matrix m = oracle::gaussian(12, 40, 12);
  const EmbeddingSpace out = mean_center(oracle::make_space(m));
  CHECK(out.matrix().rowwise().mean().norm() <= 1e-12);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const Vector before = m.col(i) - m.col(j);
      const Vector after = out.matrix().col(i) - out.matrix().col(j);
      CHECK((before - after).norm() <= 1e-12);
    }
  }
}

TEST_CASE("center_then_length examples") {
  SUBCASE("basic") {
    const EmbeddingSpace out = center_then_length(from_columns({{2, 0}, {0, 0}}));
    CHECK(out.matrix()(0, 0) == doctest::Approx(1.0));
    CHECK(out.matrix()(0, 1) == doctest::Approx(-1.0));
  }
  SUBCASE("degenerate equal columns fail") {
    CHECK_THROWS_AS(center_then_length(from_columns({{1, 1}, {1, 1}})),
                    NumericError);
  }
}

TEST_CASE("one round often leaves the mean nonzero (Gaussian inputs)") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(50, 1000, 13));
  const EmbeddingSpace out = center_then_length(space);
  const auto res = constraint_residuals(out);
  CHECK(res.max_length_residual <= 1e-12);  // unit length is exact
  CHECK(res.mean_norm_residual > 1e-6);     // the mean moved again
}

TEST_CASE("iterative_normalize hand trace for {(3,0),(0,4)}") {
  const EmbeddingSpace start = from_columns({{3, 0}, {0, 4}});
  SUBCASE("round one") {
    const auto [out, report] = iterative_normalize(start, {.rounds = 1});
    CHECK(out.matrix()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.matrix()(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(out.matrix()(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(out.matrix()(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(report.rounds.size() == 1);
  }
  SUBCASE("round two reaches the fixed point") {
    const auto [out, report] = iterative_normalize(start, {.rounds = 2});
    const double h = std::sqrt(2.0) / 2.0;
    CHECK(std::abs(out.matrix()(0, 0) - h) <= 1e-10);
    CHECK(std::abs(out.matrix()(1, 0) + h) <= 1e-10);
    CHECK(std::abs(out.matrix()(0, 1) + h) <= 1e-10);
    CHECK(std::abs(out.matrix()(1, 1) - h) <= 1e-10);
  }
}

TEST_CASE("iterative_normalize fixed point stops in one round") {
  const auto [out, report] =
      iterative_normalize(from_columns({{1, 0}, {-1, 0}}), {.rounds = 5});
  CHECK(report.rounds.size() == 1);  // tolerance 0 met exactly
  CHECK(report.converged);
  CHECK(report.rounds[0].iterate_delta == 0.0);
  CHECK(out.matrix()(0, 0) == 1.0);
}

TEST_CASE("iterative_normalize matches the plain-loop alternation oracle") {
  const Matrix m = oracle::gaussian(10, 40, 14);
  const auto [out, report] =
      iterative_normalize(oracle::make_space(m), {.rounds = 7});
  const Matrix expected = oracle::alternation_reference(m, 7);
  CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(report.rounds.size() == 7);
}

TEST_CASE("iterative_normalize converges on a random space") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(50, 1000, 15));
  SUBCASE("early stop at tolerance") {
    const auto [out, report] =
        iterative_normalize(space, {.rounds = 100, .tolerance = 1e-9});
    CHECK(report.converged);
    CHECK(report.rounds.size() < 100);  // stopped well before the budget
    const auto& last = report.rounds.back();
    CHECK(last.max_length_residual <= 1e-9);
    CHECK(last.mean_norm_residual <= 1e-9);
  }
  SUBCASE("full budget drives the iterate delta down") {
    const auto [out, report] = iterative_normalize(space, {.rounds = 100});
    REQUIRE(report.rounds.size() == 100);
    const auto& last = report.rounds.back();
    CHECK(last.max_length_residual <= 1e-9);
    CHECK(last.mean_norm_residual <= 1e-9);
    CHECK(last.iterate_delta <= 1e-8);
    // The non-zero hypothesis held throughout and is auditable per round.
    for (const auto& r : report.rounds) {
      CHECK(r.min_column_length > 0.1);
      CHECK(r.iterate_delta >= 0.0);
      CHECK(r.max_length_residual >= 0.0);
      CHECK(r.mean_norm_residual >= 0.0);
    }
  }
}

TEST_CASE("iterate deltas shrink monotonically enough to converge") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(30, 300, 16));
  const auto [out, report] = iterative_normalize(space, {.rounds = 60});
  REQUIRE(report.rounds.size() == 60);
  CHECK(report.rounds.back().iterate_delta <= 1e-8);
}

TEST_CASE("zero column mid-run names the round and word") {
  Matrix m(2, 3);
  m << 1, -1, 0, 1, 1, 0;  // third column zero
  CHECK_THROWS_WITH_AS(iterative_normalize(oracle::make_space(m), {.rounds = 3}),
                       doctest::Contains("round 1"), NumericError);
}

TEST_CASE("perturb_zeros repairs zero columns deterministically") {
  Matrix m(2, 3);
  m << 1, -1, 0, 1, 1, 0;
  const auto [a, ra] = iterative_normalize(
      oracle::make_space(m), {.rounds = 5, .perturb_zeros = true});
  const auto [b, rb] = iterative_normalize(
      oracle::make_space(m), {.rounds = 5, .perturb_zeros = true});
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(constraint_residuals(a).min_column_length > 0.0);
}

TEST_CASE("constraint_residuals hand values") {
  SUBCASE("satisfied space") {
    const auto res = constraint_residuals(from_columns({{1, 0}, {-1, 0}}));
    CHECK(res.max_length_residual == 0.0);
    CHECK(res.mean_norm_residual == 0.0);
    CHECK(res.min_column_length == 1.0);
  }
  SUBCASE("lengths {2,1}, mean (1, 0.5)") {
    const auto res = constraint_residuals(from_columns({{2, 0}, {0, 1}}));
    CHECK(res.max_length_residual == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(res.mean_norm_residual ==
          doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-14));
    CHECK(res.min_column_length == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("mean_vector_length basics and rotation invariance") {
  CHECK(mean_vector_length(from_columns({{1, 0}, {-1, 0}})) == 0.0);
  CHECK(mean_vector_length(from_columns({{2, 0}, {0, 0}})) == 1.0);
  const Matrix m = oracle::gaussian(10, 30, 17);
  const Matrix q = oracle::random_orthogonal(10, 18);
  const double before = mean_vector_length(oracle::make_space(m));
  const double after = mean_vector_length(oracle::make_space(q * m));
  CHECK(std::abs(before - after) <= 1e-10);
}

TEST_CASE("a space satisfying both constraints is a round's fixed point") {
  // Paired antipodal unit columns satisfy the constraints exactly.
  Matrix m(4, 8);
  m.setZero();
  for (int k = 0; k < 4; ++k) {
    m(k, 2 * k) = 1.0;
    m(k, 2 * k + 1) = -1.0;
  }
  const Matrix q = oracle::random_orthogonal(4, 19);
  for (const Matrix& x : {m, Matrix(q * m)}) {
    const auto [out, report] = iterative_normalize(oracle::make_space(x), {.rounds = 1});
    CHECK((out.matrix() - x).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("both projections commute with global rotation") {
  const Matrix m = oracle::gaussian(8, 25, 20);
  const Matrix q = oracle::random_orthogonal(8, 21);
  const EmbeddingSpace plain = oracle::make_space(m);
  const EmbeddingSpace rotated = oracle::make_space(q * m);

  const Matrix ln = q * length_normalize(plain).matrix();
  CHECK((length_normalize(rotated).matrix() - ln).cwiseAbs().maxCoeff() <= 1e-10);

  const Matrix mc = q * mean_center(plain).matrix();
  CHECK((mean_center(rotated).matrix() - mc).cwiseAbs().maxCoeff() <= 1e-10);

  const Matrix in_plain =
      q * iterative_normalize(plain, {.rounds = 5}).first.matrix();
  const Matrix in_rot = iterative_normalize(rotated, {.rounds = 5}).first.matrix();
  CHECK((in_rot - in_plain).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("normalize_with dispatches by method name") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(6, 20, 22));
  auto [none, none_rep] = normalize_with(space, NormalizationMethod::none());
  CHECK_FALSE(none_rep.has_value());
  CHECK((none.matrix() - space.matrix()).cwiseAbs().maxCoeff() == 0.0);

  auto [cl, cl_rep] = normalize_with(space, NormalizationMethod::parse("cl"));
  CHECK_FALSE(cl_rep.has_value());
  CHECK(constraint_residuals(cl).max_length_residual <= 1e-12);

  auto [in, in_rep] = normalize_with(space, NormalizationMethod::parse("iternorm"));
  REQUIRE(in_rep.has_value());
  CHECK(in_rep->rounds.size() == 5);

  CHECK_THROWS_AS(NormalizationMethod::parse("bogus"), UsageError);
  CHECK_THROWS_AS(NormalizationMethod::iter_norm(0), UsageError);
}

}  // TEST_SUITE
