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
#include <set>

#include "oracles.hpp"
#include "xlign/align.hpp"
#include "xlign/errors.hpp"
#include "xlign/normalize.hpp"
#include "xlign/synthetic.hpp"

using namespace xlign;

TEST_SUITE("synthetic") {

TEST_CASE("generation is deterministic in the seed") {
  SyntheticSpec spec;
  spec.n = 100;
  spec.d = 8;
  spec.seed = 11;
  spec.train_pairs = 30;
  spec.test_pairs = 30;
  const SyntheticWorld a = generate_synthetic(spec);
  const SyntheticWorld b = generate_synthetic(spec);
  CHECK((a.src.matrix() - b.src.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.tgt.matrix() - b.tgt.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.train_dict.pairs == b.train_dict.pairs);
  CHECK(a.test_dict.pairs == b.test_dict.pairs);

  spec.seed = 12;
  const SyntheticWorld c = generate_synthetic(spec);
  CHECK((a.src.matrix() - c.src.matrix()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("noiseless undistorted world: Procrustes recovers the rotation") {
  SyntheticSpec spec;
  spec.n = 400;
  spec.d = 20;
  spec.noise_sigma = 0.0;
  spec.seed = 13;
  spec.train_pairs = 100;
  spec.test_pairs = 100;
  const SyntheticWorld world = generate_synthetic(spec);
  CHECK((world.rotation.transpose() * world.rotation -
         Matrix::Identity(20, 20)).norm() <= 1e-12);
  const LinearMap map = procrustes_fit(world.src, world.tgt, world.train_dict);
  CHECK((map.matrix - world.rotation).norm() <= 1e-8);
}

TEST_CASE("a mean offset breaks center-invariance between the sides") {
  SyntheticSpec spec;
  spec.n = 300;
  spec.d = 16;
  spec.noise_sigma = 0.0;
  spec.mean_offset = offset_with_norm(16, 0.5, 21);
  spec.seed = 21;
  spec.train_pairs = 50;
  spec.test_pairs = 50;
  const SyntheticWorld world = generate_synthetic(spec);
  const double src_center = mean_vector_length(world.src);
  const double tgt_center = mean_vector_length(world.tgt);
  CHECK(std::abs(src_center - tgt_center) > 0.1);
  CHECK(src_center > 0.3);  // the offset dominates the sample mean
}

TEST_CASE("offset_with_norm hits the requested norm deterministically") {
  const Vector a = offset_with_norm(24, 0.5, 7);
  const Vector b = offset_with_norm(24, 0.5, 7);
  CHECK((a - b).norm() == 0.0);
  CHECK(a.norm() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(offset_with_norm(24, 0.0, 7).norm() == 0.0);
}

TEST_CASE("dictionary splits are disjoint and sized as requested") {
  SyntheticSpec spec;
  spec.n = 200;
  spec.d = 10;
  spec.seed = 31;
  spec.train_pairs = 60;
  spec.test_pairs = 70;
  const SyntheticWorld world = generate_synthetic(spec);
  CHECK(world.train_dict.size() == 60);
  CHECK(world.test_dict.size() == 70);
  CHECK(world.test_multi.size() == 70);
  std::set<int> train_indices;
  for (const auto& [i, j] : world.train_dict.pairs) {
    CHECK(i == j);
    train_indices.insert(i);
  }
  for (const auto& [i, j] : world.test_dict.pairs) {
    CHECK(i == j);
    CHECK(train_indices.count(i) == 0);
  }
}

TEST_CASE("invalid specs are rejected") {
  SyntheticSpec spec;
  spec.n = 1;
  CHECK_THROWS_AS(generate_synthetic(spec), UsageError);
  spec = {};
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(generate_synthetic(spec), UsageError);
  spec = {};
  spec.length_scale_min = 2.0;
  spec.length_scale_max = 1.0;
  CHECK_THROWS_AS(generate_synthetic(spec), UsageError);
  spec = {};
  spec.n = 100;
  spec.train_pairs = 80;
  spec.test_pairs = 80;
  CHECK_THROWS_AS(generate_synthetic(spec), UsageError);
  spec = {};
  spec.mean_offset = Vector::Ones(3);  // wrong dimension
  CHECK_THROWS_AS(generate_synthetic(spec), UsageError);
}

TEST_CASE("column length scales land in the requested band") {
  SyntheticSpec spec;
  spec.n = 500;
  spec.d = 12;
  spec.noise_sigma = 0.0;
  spec.length_scale_min = 0.5;
  spec.length_scale_max = 2.0;
  spec.seed = 41;
  spec.train_pairs = 100;
  spec.test_pairs = 100;
  const SyntheticWorld world = generate_synthetic(spec);
  // src column i = s_i * base_i with ||base_i|| shared with the target
  // construction; the ratio of source to rotated-target column lengths is
  // exactly the drawn scale.
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < spec.n; ++i) {
    const double ratio =
        world.src.matrix().col(i).norm() / world.tgt.matrix().col(i).norm();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo >= 0.5 - 1e-9);
  CHECK(hi <= 2.0 + 1e-9);
  CHECK(hi - lo > 0.5);  // the band is actually used
}

}  // TEST_SUITE
