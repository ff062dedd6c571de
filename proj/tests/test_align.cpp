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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "xlign/align.hpp"
#include "xlign/errors.hpp"
#include "xlign/normalize.hpp"
#include "xlign/retrieval.hpp"
#include "xlign/synthetic.hpp"

using namespace xlign;

namespace {

SeedDictionary identity_pairs(int n) {
  SeedDictionary dict;
  for (int i = 0; i < n; ++i) dict.pairs.emplace_back(i, i);
  return dict;
}

}  // namespace

TEST_SUITE("align") {

TEST_CASE("procrustes on identical spaces returns the identity") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(6, 40, 30));
  const LinearMap map = procrustes_fit(space, space, identity_pairs(40));
  CHECK((map.matrix - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(map.orthogonal);
}

TEST_CASE("procrustes recovers a 90-degree rotation exactly") {
  Matrix src(2, 2), tgt(2, 2);
  src << 1, 0, 0, 1;           // e1, e2
  tgt << 0, -1, 1, 0;          // each rotated by +90 degrees
  const LinearMap map = procrustes_fit(oracle::make_space(src),
                                       oracle::make_space(tgt),
                                       identity_pairs(2));
  Matrix expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((map.matrix - expected).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("procrustes exactly recovers a random rotation from 100 pairs") {
  const Matrix x = oracle::gaussian(20, 500, 31);
  const Matrix q = oracle::random_orthogonal(20, 32);
  const EmbeddingSpace src = oracle::make_space(x, "s");
  const EmbeddingSpace tgt = oracle::make_space(q * x, "t");
  SeedDictionary dict;
  std::mt19937 gen(33);
  for (int p = 0; p < 100; ++p) {
    const int i = static_cast<int>(gen() % 500);
    dict.pairs.emplace_back(i, i);
  }
  const LinearMap map = procrustes_fit(src, tgt, dict);
  CHECK((map.matrix - q).norm() <= 1e-8);
  CHECK(map.orthogonality_residual <= 1e-10);

  // Sampling oracle: no random orthogonal map does better on the objective.
  const double fitted = objective_value(map, src, tgt, dict);
  for (unsigned s = 0; s < 300; ++s) {
    LinearMap probe;
    probe.matrix = oracle::random_orthogonal(20, 1000 + s);
    probe.orthogonal = true;
    CHECK(fitted <= objective_value(probe, src, tgt, dict) + 1e-9);
  }
}

TEST_CASE("objective_value hand examples") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(4, 10, 34));
  LinearMap eye;
  eye.matrix = Matrix::Identity(4, 4);
  eye.orthogonal = true;
  CHECK(objective_value(eye, space, space, identity_pairs(10)) ==
        doctest::Approx(0.0));

  Matrix sm(2, 1), tm(2, 1);
  sm << 1, 0;
  tm << 0, 1;
  LinearMap eye2;
  eye2.matrix = Matrix::Identity(2, 2);
  SeedDictionary one;
  one.pairs = {{0, 0}};
  CHECK(objective_value(eye2, oracle::make_space(sm), oracle::make_space(tm), one) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("procrustes is invariant to dictionary order") {
  const Matrix x = oracle::gaussian(8, 60, 35);
  const Matrix q = oracle::random_orthogonal(8, 36);
  const EmbeddingSpace src = oracle::make_space(x, "s");
  const EmbeddingSpace tgt = oracle::make_space(q * x, "t");
  SeedDictionary dict = identity_pairs(60);
  SeedDictionary shuffled = dict;
  std::mt19937 gen(37);
  std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), gen);
  const LinearMap a = procrustes_fit(src, tgt, dict);
  const LinearMap b = procrustes_fit(src, tgt, shuffled);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("procrustes error paths") {
  const EmbeddingSpace a = oracle::make_space(oracle::gaussian(4, 5, 38));
  const EmbeddingSpace b = oracle::make_space(oracle::gaussian(5, 5, 39));
  CHECK_THROWS_AS(procrustes_fit(a, b, identity_pairs(5)), DataError);
  CHECK_THROWS_AS(procrustes_fit(a, a, SeedDictionary{}), DataError);
  SeedDictionary oob;
  oob.pairs = {{0, 99}};
  CHECK_THROWS_AS(procrustes_fit(a, a, oob), DataError);
}

TEST_CASE("orthogonal maps preserve lengths and the center magnitude") {
  const Matrix x = oracle::gaussian(12, 200, 40);
  const Matrix q = oracle::random_orthogonal(12, 41);
  const EmbeddingSpace src = oracle::make_space(x, "s");
  const EmbeddingSpace tgt = oracle::make_space(q * x, "t");
  const LinearMap map = procrustes_fit(src, tgt, identity_pairs(200));

  std::mt19937 gen(42);
  std::normal_distribution<double> dist;
  for (int t = 0; t < 100; ++t) {
    Vector v(12);
    for (int k = 0; k < 12; ++k) v[k] = dist(gen);
    CHECK(std::abs((map.matrix * v).norm() - v.norm()) <= 1e-10);
  }
  const Vector mean = x.rowwise().mean();
  CHECK(std::abs((map.matrix * mean).norm() - mean.norm()) <= 1e-10);
}

TEST_CASE("unit vectors: dot product, cosine and distance agree") {
  std::mt19937 gen(43);
  std::normal_distribution<double> dist;
  for (int t = 0; t < 20; ++t) {
    Vector u(7), v(7);
    for (int k = 0; k < 7; ++k) {
      u[k] = dist(gen);
      v[k] = dist(gen);
    }
    u.normalize();
    v.normalize();
    const double dot = u.dot(v);
    const double cos = u.dot(v) / (u.norm() * v.norm());
    const double dist2 = 1.0 - 0.5 * (u - v).squaredNorm();
    CHECK(std::abs(dot - cos) <= 1e-12);
    CHECK(std::abs(dot - dist2) <= 1e-12);
  }
}

TEST_CASE("map files round trip and validate") {
  const Matrix x = oracle::gaussian(5, 30, 44);
  const Matrix q = oracle::random_orthogonal(5, 45);
  const LinearMap map = procrustes_fit(oracle::make_space(x, "s"),
                                       oracle::make_space(q * x, "t"),
                                       identity_pairs(30));
  std::ostringstream out;
  write_map(map, out);
  std::istringstream in(out.str());
  const LinearMap back = read_map(in);
  CHECK((back.matrix - map.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.orthogonal == map.orthogonal);

  SUBCASE("bad header") {
    std::istringstream bad("x 1\n");
    CHECK_THROWS_AS(read_map(bad), DataError);
  }
  SUBCASE("truncated body") {
    std::istringstream bad("2 0\n1 0\n");
    CHECK_THROWS_AS(read_map(bad), DataError);
  }
  SUBCASE("orthogonal tag must hold") {
    std::istringstream bad("2 1\n1 0\n0 2\n");
    CHECK_THROWS_WITH_AS(read_map(bad), doctest::Contains("orthogonal"), DataError);
  }
}

TEST_CASE("synthetic dictionary is the identity for a shared space") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(10, 120, 46));
  LinearMap eye;
  eye.matrix = Matrix::Identity(10, 10);
  eye.orthogonal = true;
  RefineConfig cfg;
  cfg.synthetic_pool = 120;
  const SeedDictionary dict = build_synthetic_dictionary(eye, space, space, cfg);
  REQUIRE(dict.size() == 120);
  for (int i = 0; i < 120; ++i) {
    CHECK(dict.pairs[i] == std::pair<int, int>{i, i});
  }
}

TEST_CASE("synthetic dictionary recovers identity pairing under Z = QX") {
  const Matrix x = oracle::gaussian(12, 200, 47);
  const Matrix q = oracle::random_orthogonal(12, 48);
  const EmbeddingSpace src = oracle::make_space(x, "s");
  const EmbeddingSpace tgt = oracle::make_space(q * x, "t");
  LinearMap map;
  map.matrix = q;
  map.orthogonal = true;
  RefineConfig cfg;
  cfg.synthetic_pool = 200;
  const SeedDictionary dict = build_synthetic_dictionary(map, src, tgt, cfg);
  REQUIRE(dict.size() == 200);
  for (const auto& [i, j] : dict.pairs) CHECK(i == j);

  // Independent check: mutual argmax over brute-force CSLS scores.
  const auto table = oracle::csls_bruteforce(q, x, q * x, [] {
    std::vector<int> all(200);
    for (int i = 0; i < 200; ++i) all[i] = i;
    return all;
  }(), cfg.knn);
  const auto expected = oracle::mutual_argmax_pairs(
      200, 200, [&](int i, int j) { return table.scores[i][j]; });
  REQUIRE(expected.size() == dict.size());
  for (std::size_t p = 0; p < expected.size(); ++p) {
    CHECK(expected[p] == dict.pairs[p]);
  }
}

TEST_CASE("synthetic dictionary pairs stay within matching clusters") {
  // Two well-separated clusters, both languages sampled around the same
  // centers; the map is the identity.
  std::mt19937 gen(49);
  std::normal_distribution<double> noise(0.0, 0.05);
  Matrix src(6, 40), tgt(6, 40);
  for (int i = 0; i < 40; ++i) {
    const int cluster = i < 20 ? 0 : 1;
    for (int k = 0; k < 6; ++k) {
      const double center = (cluster == 0) ? (k == 0 ? 1.0 : 0.0)
                                           : (k == 1 ? 1.0 : 0.0);
      src(k, i) = center + noise(gen);
      tgt(k, i) = center + noise(gen);
    }
  }
  LinearMap eye;
  eye.matrix = Matrix::Identity(6, 6);
  eye.orthogonal = true;
  RefineConfig cfg;
  cfg.synthetic_pool = 40;
  cfg.knn = 3;
  const SeedDictionary dict =
      build_synthetic_dictionary(eye, oracle::make_space(src, "s"),
                                 oracle::make_space(tgt, "t"), cfg);
  CHECK(dict.size() > 0);
  for (const auto& [i, j] : dict.pairs) {
    CHECK((i < 20) == (j < 20));
  }
}

TEST_CASE("refine keeps an exact rotation fixed") {
  const Matrix x = oracle::gaussian(10, 300, 50);
  const Matrix q = oracle::random_orthogonal(10, 51);
  const EmbeddingSpace src = oracle::make_space(x, "s");
  const EmbeddingSpace tgt = oracle::make_space(q * x, "t");
  SeedDictionary seed;
  for (int i = 0; i < 50; ++i) seed.pairs.emplace_back(i, i);
  RefineConfig cfg;
  cfg.synthetic_pool = 300;
  const RefineResult result = refine(src, tgt, seed, cfg);
  CHECK_FALSE(result.stopped_early);
  CHECK(result.dictionary_sizes.size() == 5);
  CHECK((result.map.matrix - q).norm() <= 1e-8);
  for (long size : result.dictionary_sizes) CHECK(size == 300);
}

TEST_CASE("refine on identical spaces stays at the identity") {
  const EmbeddingSpace space = oracle::make_space(oracle::gaussian(8, 100, 52));
  RefineConfig cfg;
  cfg.synthetic_pool = 100;
  const RefineResult result = refine(space, space, identity_pairs(100), cfg);
  CHECK((result.map.matrix - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("refinement does not hurt held-out accuracy on a noisy world") {
  SyntheticSpec spec;
  spec.n = 600;
  spec.d = 30;
  spec.noise_sigma = 0.05;
  spec.mean_offset = offset_with_norm(30, 0.5, 99);
  spec.length_scale_min = 0.5;
  spec.length_scale_max = 2.0;
  spec.seed = 99;
  spec.train_pairs = 150;
  spec.test_pairs = 150;
  const SyntheticWorld world = generate_synthetic(spec);

  const LinearMap plain = procrustes_fit(world.src, world.tgt, world.train_dict);
  RefineConfig cfg;
  cfg.synthetic_pool = 600;
  const RefineResult refined = refine(world.src, world.tgt, world.train_dict, cfg);

  RetrievalOptions opts;
  const double p_plain =
      evaluate_p1(plain, world.src, world.tgt, world.test_multi, opts).accuracy;
  const double p_refined =
      evaluate_p1(refined.map, world.src, world.tgt, world.test_multi, opts).accuracy;
  CHECK(p_refined >= p_plain);
}

}  // TEST_SUITE
