// Copyright 2026 dmf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dmf/project.hpp"
#include "dmf/shallow.hpp"
#include "test_util.hpp"

using namespace dmf;

namespace {

DeepModel two_layer_model(Nonlinearity g, uint64_t seed) {
  Rng rng(seed);
  DeepModel model;
  model.g = g;
  model.z = {rng.normal_matrix(12, 6), rng.normal_matrix(6, 3)};
  Matrix h_top = rng.uniform_matrix(3, 10);
  model.h = {g.fwd(Matrix(model.z[1] * h_top)).cwiseMax(0.0), h_top};
  return model;
}

}  // namespace

TEST_CASE("project_pinv inverts an exact single-layer sample") {
  Rng rng(1);
  DeepModel model;
  model.g = Nonlinearity::identity();
  model.z = {rng.normal_matrix(10, 4)};  // full column rank a.s.
  model.h = {rng.uniform_matrix(4, 6)};
  Vector h_true = rng.uniform_matrix(4, 1).col(0);
  Vector x_star = model.z[0] * h_true;

  ProjectionResult result = project_pinv(model, x_star);
  CHECK(result.layer == 1);
  CHECK((result.h[0] - h_true).norm() <= 1e-10);
  CHECK(result.residual <= 1e-10);
}

TEST_CASE("project_pinv maps zero to zero") {
  DeepModel model = two_layer_model(Nonlinearity::identity(), 2);
  ProjectionResult result = project_pinv(model, Vector::Zero(12));
  for (const Vector& h : result.h) CHECK(h.norm() == 0.0);
}

TEST_CASE("project_pinv residual matches an independent recomputation") {
  for (Nonlinearity g : {Nonlinearity::identity(), Nonlinearity::square()}) {
    DeepModel model = two_layer_model(g, 3);
    Rng rng(4);
    Vector x_star = rng.normal_matrix(12, 1).col(0);
    ProjectionResult result = project_pinv(model, x_star);
    // Re-evaluate the nested reconstruction from the returned features.
    Matrix a = result.h[1];
    a = g.fwd(Matrix(model.z[1] * a));
    const double residual = (x_star - model.z[0] * a).norm();
    CHECK(result.residual == doctest::Approx(residual).epsilon(1e-12));
  }
}

TEST_CASE("project_pinv flags clipped inversions") {
  DeepModel model = two_layer_model(Nonlinearity::stanh(), 5);
  Rng rng(6);
  // Large samples exceed the stanh range after the first inversion.
  Vector x_star = 100.0 * rng.normal_matrix(12, 1).col(0);
  ProjectionResult result = project_pinv(model, x_star);
  CHECK(result.clipped.size() == 2);
  CHECK(result.clipped[1]);
}

TEST_CASE("project_nls recovers a planted nonnegative vector") {
  Rng rng(7);
  DeepModel model;
  model.g = Nonlinearity::identity();
  model.z = {rng.normal_matrix(15, 5)};
  model.h = {rng.uniform_matrix(5, 8)};
  Vector h_true = rng.uniform_matrix(5, 1).col(0);
  Vector x_star = model.z[0] * h_true;

  TrainConfig cfg;
  cfg.max_iters = 2000;
  cfg.kappa = 1e-14;
  ProjectionResult result = project_nls(model, x_star, cfg);
  CHECK((result.h[0] - h_true).norm() / h_true.norm() <= 1e-3);
  CHECK((result.h[0].array() >= 0.0).all());
}

TEST_CASE("project_nls output is always nonnegative") {
  for (Nonlinearity g : {Nonlinearity::identity(), Nonlinearity::square(),
                         Nonlinearity::stanh()}) {
    DeepModel model = two_layer_model(g, 8);
    Rng rng(9);
    TrainConfig cfg;
    cfg.max_iters = 100;
    for (int t = 0; t < 5; ++t) {
      Vector x_star = rng.normal_matrix(12, 1).col(0);
      ProjectionResult result = project_nls(model, x_star, cfg);
      for (const Vector& h : result.h) CHECK((h.array() >= 0.0).all());
    }
  }
}

TEST_CASE("project_nls beats clipped pseudo-inverse features") {
  DeepModel model = two_layer_model(Nonlinearity::identity(), 10);
  Rng rng(11);
  TrainConfig cfg;
  cfg.max_iters = 500;
  const Matrix basis = model.z[0] * model.z[1];
  for (int t = 0; t < 20; ++t) {
    Vector x_star = rng.normal_matrix(12, 1).col(0);
    ProjectionResult pinv_result = project_pinv(model, x_star);
    ProjectionResult nls_result = project_nls(model, x_star, cfg);
    const double clipped_residual =
        (x_star - basis * pinv_result.h[1].cwiseMax(0.0)).norm();
    CHECK(nls_result.residual <= clipped_residual * (1.0 + 1e-9));
  }
}

TEST_CASE("project_nls on in-sample columns reaches the training residual") {
  Matrix x = test::planted_seminmf(20, 5, 40, 12);
  TrainConfig cfg;
  cfg.max_iters = 2000;
  cfg.kappa = 1e-13;
  auto [factors, report] = semi_nmf(x, 5, cfg);
  DeepModel model;
  model.g = Nonlinearity::identity();
  model.z = {factors.z};
  model.h = {factors.h};

  TrainConfig proj_cfg;
  proj_cfg.max_iters = 3000;
  proj_cfg.kappa = 1e-14;
  for (Index j = 0; j < x.cols(); j += 7) {
    const double train_residual = (x.col(j) - factors.z * factors.h.col(j)).norm();
    ProjectionResult result = project_nls(model, x.col(j), proj_cfg);
    CHECK(result.residual <= train_residual * (1.0 + 1e-6));
  }
}

TEST_CASE("projection is deterministic") {
  DeepModel model = two_layer_model(Nonlinearity::square(), 13);
  Rng rng(14);
  Vector x_star = rng.normal_matrix(12, 1).col(0);
  TrainConfig cfg;
  cfg.max_iters = 50;
  ProjectionResult a = project_nls(model, x_star, cfg);
  ProjectionResult b = project_nls(model, x_star, cfg);
  for (size_t l = 0; l < a.h.size(); ++l) CHECK(a.h[l] == b.h[l]);
  CHECK(a.residual == b.residual);
}

TEST_CASE("project_batch matches per-sample projection") {
  DeepModel model = two_layer_model(Nonlinearity::identity(), 15);
  Rng rng(16);
  Matrix xs = rng.normal_matrix(12, 6);
  Matrix batch = project_batch(model, xs, ProjectionMethod::kPinv);
  for (Index j = 0; j < xs.cols(); ++j) {
    ProjectionResult single = project_pinv(model, xs.col(j));
    CHECK((batch.col(j) - single.h[1]).norm() <= 1e-14);
  }
}

TEST_CASE("projection validates the sample dimension") {
  DeepModel model = two_layer_model(Nonlinearity::identity(), 17);
  Vector bad = Vector::Zero(5);
  TrainConfig cfg;
  CHECK_THROWS_AS(project_pinv(model, bad), InvalidInput);
  CHECK_THROWS_AS(project_nls(model, bad, cfg), InvalidInput);
  CHECK_THROWS_AS(project_pinv(model, Vector::Zero(12), 3), InvalidInput);
}
