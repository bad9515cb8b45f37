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

#ifndef DMF_PROJECT_HPP_
#define DMF_PROJECT_HPP_

#include <vector>

#include "dmf/deep.hpp"
#include "dmf/matrix.hpp"
#include "dmf/train.hpp"

namespace dmf {

enum class ProjectionMethod { kPinv, kNls };

/// Features of one out-of-sample point at every layer of a model. `layer`
/// (1-based) names the layer the residual was evaluated at; `clipped[l]`
/// flags layers where inverting the nonlinearity required domain clipping
/// (pseudo-inverse method only).
struct ProjectionResult {
  std::vector<Vector> h;  // h[l]: layer l+1 features
  ProjectionMethod method = ProjectionMethod::kPinv;
  int layer = 0;
  double residual = 0.0;
  std::vector<bool> clipped;
  bool converged = true;
};

/// Method 1, basis reconstruction: for identity models the layer-l features
/// are pinv(Z_1 ... Z_l) x*, otherwise the chain Z_l^+ ginv(... ginv(Z_1^+
/// x*)) with ginv clipping into the attainable range. May produce negative
/// entries. The residual is reported for `layer` (default: the top layer).
ProjectionResult project_pinv(const DeepModel& model, const Vector& x_star,
                              int layer = -1);

/// Method 2, nonnegativity-preserving: per layer, minimizes the
/// reconstruction error of x* over h >= 0 with all bases frozen, using the
/// multiplicative feature update (identity models) or projected gradient
/// descent (nonlinear models), initialized at max(method-1 features, eps).
ProjectionResult project_nls(const DeepModel& model, const Vector& x_star,
                             const TrainConfig& cfg, int layer = -1);

/// Column-wise batch convenience: layer-`layer` features for every column
/// of x_stars (columns are projected independently; the nls stopping rule is
/// evaluated on the summed objective).
Matrix project_batch(const DeepModel& model, const Matrix& x_stars,
                     ProjectionMethod method, int layer = -1,
                     const TrainConfig& cfg = TrainConfig{});

}  // namespace dmf

#endif  // DMF_PROJECT_HPP_
