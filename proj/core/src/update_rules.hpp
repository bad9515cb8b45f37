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
//
// Internal alternating-update machinery shared by the shallow factorizers
// and the linear deep fine-tuning path. Not installed.

#ifndef DMF_SRC_UPDATE_RULES_HPP_
#define DMF_SRC_UPDATE_RULES_HPP_

#include <vector>

#include "dmf/graph.hpp"
#include "dmf/matrix.hpp"
#include "dmf/train.hpp"

namespace dmf::detail {

/// One Laplacian smoothness penalty attached to a feature matrix.
struct GraphTerm {
  double lambda = 0.0;
  const AttributeGraph* graph = nullptr;
};

using LayerTerms = std::vector<std::vector<GraphTerm>>;  // one list per layer

/// Least-squares basis update Z = X pinv(H).
Matrix ls_basis_update(const Matrix& x, const Matrix& h);

/// Multiplicative feature update for a mixed-sign basis B. Derived from the
/// gradient of
///   F(H) = 0.5 ||X - B H||_F^2 + sum_t 0.5 lambda_t Tr(H L_t H^T)
/// which is B^T B H - B^T X + sum_t lambda_t H L_t. Splitting every factor
/// into nonnegative parts ([A]+ - [A]-, L = D - W) and forming the standard
/// ratio of the negative to the positive gradient contributions gives
///   H <- H .* ( ([B^T X]+ + [B^T B]- H + sum_t l_t H W_t)
///             / ([B^T X]- + [B^T B]+ H + sum_t l_t H D_t) )^eta,
/// which preserves H >= 0 and leaves fixed points of the gradient unchanged.
/// Terms with lambda == 0 are skipped entirely so that the zero-lambda
/// trajectory is bit-identical to the unregularized one.
Matrix seminmf_feature_update(const Matrix& b, const Matrix& x,
                              const Matrix& h, double eta,
                              const std::vector<GraphTerm>& terms);

/// 0.5 ||X - Z_1 ... Z_m H_m||_F^2, evaluated in a fixed association order.
double linear_reconstruction_cost(const Matrix& x,
                                  const std::vector<Matrix>& z,
                                  const std::vector<Matrix>& h);

/// Reconstruction cost plus sum_i sum_t 0.5 lambda Tr(H_i L H_i^T) over the
/// stored per-layer feature matrices.
double linear_objective(const Matrix& x, const std::vector<Matrix>& z,
                        const std::vector<Matrix>& h, const LayerTerms& terms);

/// Runs alternating sweeps (layers in order, basis before features within a
/// layer) with the kappa stopping rule until convergence or cfg.max_iters.
/// `terms` may be empty, meaning no regularization on any layer.
TrainReport run_linear(const Matrix& x, std::vector<Matrix>& z,
                       std::vector<Matrix>& h, const TrainConfig& cfg,
                       const LayerTerms& terms);

/// Initial factors for a factorization run: resolves InitKind::kAuto and the
/// seeded random initialization (H ~ U(0,1); Z standard normal, folded to
/// |N(0,1)| when the basis must stay nonnegative).
std::pair<Matrix, Matrix> init_factors(const Matrix& x, Index k,
                                       const TrainConfig& cfg,
                                       bool nonneg_basis);

}  // namespace dmf::detail

#endif  // DMF_SRC_UPDATE_RULES_HPP_
