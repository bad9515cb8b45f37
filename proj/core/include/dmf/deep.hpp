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

#ifndef DMF_DEEP_HPP_
#define DMF_DEEP_HPP_

#include <string>
#include <utility>
#include <vector>

#include "dmf/graph.hpp"
#include "dmf/matrix.hpp"
#include "dmf/shallow.hpp"
#include "dmf/train.hpp"

namespace dmf {

enum class NonlinKind { kIdentity, kStanh, kSquare };

/// Elementwise squashing function applied between layers. The inverse clips
/// its argument into the attainable range (delta margin 1e-7 for the scaled
/// tanh, negative values to zero for the square) and reports the clip.
struct Nonlinearity {
  NonlinKind kind = NonlinKind::kIdentity;
  double alpha = 1.7159;  // stanh scale
  double beta = 2.0 / 3.0;  // stanh slope

  static Nonlinearity identity() { return {NonlinKind::kIdentity}; }
  static Nonlinearity stanh() { return {NonlinKind::kStanh}; }
  static Nonlinearity square() { return {NonlinKind::kSquare}; }
  static Nonlinearity from_name(const std::string& name);

  bool is_identity() const { return kind == NonlinKind::kIdentity; }
  std::string name() const;

  double fwd(double v) const;
  double grad(double v) const;
  double inv(double y, bool* clipped) const;

  Matrix fwd(const Matrix& v) const;
  Matrix grad(const Matrix& v) const;
  Matrix inv(const Matrix& y, bool* clipped) const;
};

/// Multi-layer factorization X ~ Z_1 g(Z_2 g(... g(Z_m H_m))). Stored
/// per-layer features h[i] approximate g(Z_{i+1} H_{i+1}) and act as the
/// layer's representation of the samples.
struct DeepModel {
  std::vector<Matrix> z;  // z[0]: p x k_1, z[i]: k_i x k_{i+1}
  std::vector<Matrix> h;  // h[i]: k_{i+1} x n
  Nonlinearity g;

  int layers() const { return static_cast<int>(z.size()); }
  Index features() const { return z.empty() ? 0 : z.front().rows(); }
  Index samples() const { return h.empty() ? 0 : h.back().cols(); }
  std::vector<Index> layer_sizes() const;

  /// Checks the shape chain and nonnegativity of the top feature matrix.
  /// Intermediate features are only required to be nonnegative when the
  /// nonlinearity cannot produce negative values (identity models trained by
  /// the multiplicative path keep them nonnegative; stanh cannot).
  void validate() const;
};

/// Greedy layer-wise pretraining: X ~ Z_1 H_1, then H_1 ~ Z_2 H_2, ...,
/// each layer solved by semi_nmf. Layer sizes are usually decreasing; an
/// increasing chain is accepted with a warning on stderr.
DeepModel pretrain(const Matrix& x, const std::vector<Index>& layer_sizes,
                   const TrainConfig& cfg,
                   Nonlinearity g = Nonlinearity::identity());

/// 0.5 ||X - Z_1 g(Z_2 g(... g(Z_m H_m)))||_F^2.
double deep_cost(const DeepModel& model, const Matrix& x);

/// Alternating fine-tuning for identity-nonlinearity models: per layer,
/// the basis gets the exact least-squares update pinv(Psi) X pinv(Ht)
/// (Psi the product of the bases below, Ht the reconstruction from above)
/// and the features get the multiplicative update for the accumulated
/// basis Psi Z_i. Stops on the kappa rule over deep_cost.
std::pair<DeepModel, TrainReport> finetune_linear(DeepModel model,
                                                  const Matrix& x,
                                                  const TrainConfig& cfg);

struct DeepGradients {
  std::vector<Matrix> z;  // dC/dZ_i
  Matrix h_top;           // dC/dH_m
};

/// Chain-rule gradients of the nested cost with respect to every basis and
/// the top feature matrix. When graphs are given (one per layer, lambda-
/// weighted), each layer's implicit features A_i contribute lambda_i A_i L_i.
DeepGradients grad_deep(const DeepModel& model, const Matrix& x,
                        const std::vector<AttributeGraph>* graphs = nullptr,
                        const std::vector<double>* lambdas = nullptr);

/// Accelerated projected gradient descent on {Z_i, H_m} with momentum
/// restarts and backtracking step halving; H_m is projected onto the
/// nonnegative orthant after every step. Intermediate features are
/// recomputed as g(Z_{i+1} ...) once training stops.
std::pair<DeepModel, TrainReport> finetune_nonlinear(
    DeepModel model, const Matrix& x, const TrainConfig& cfg,
    const std::vector<AttributeGraph>* graphs = nullptr,
    const std::vector<double>* lambdas = nullptr);

/// Weakly-supervised deep training: greedy wsf pretraining with one graph
/// per layer, then fine-tuning (multiplicative sweeps with the per-layer
/// lambda H W / lambda H D terms for identity models, gradient descent
/// otherwise). A zero lambda disables a layer's supervision.
std::pair<DeepModel, TrainReport> train_deep_wsf(
    const Matrix& x, const std::vector<Index>& layer_sizes,
    const std::vector<AttributeGraph>& graphs,
    const std::vector<double>& lambdas, const TrainConfig& cfg,
    Nonlinearity g = Nonlinearity::identity());

/// Reuses a trained model's bases on new data: copies every Z_i, solves the
/// top features by nonnegative projection and fills intermediate layers from
/// the reconstruction chain. The result is ready for unsupervised
/// fine-tuning on the target data.
DeepModel transfer_init(const DeepModel& source, const Matrix& x_target);

}  // namespace dmf

#endif  // DMF_DEEP_HPP_
