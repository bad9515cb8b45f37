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

#ifndef DMF_SHALLOW_HPP_
#define DMF_SHALLOW_HPP_

#include <utility>
#include <vector>

#include "dmf/graph.hpp"
#include "dmf/matrix.hpp"
#include "dmf/train.hpp"

namespace dmf {

/// One basis/features pair. H is entrywise nonnegative; Z is mixed sign
/// except for nmf_mul/gnmf, where it is nonnegative as well.
struct FactorPair {
  Matrix z;  // p x k
  Matrix h;  // k x n
};

/// Factorizes mixed-sign X into mixed-sign Z and nonnegative H by
/// alternating a least-squares basis update Z <- X pinv(H) with the
/// multiplicative feature update
///   H <- H .* ( ([Z^T X]+ + [Z^T Z]- H) / ([Z^T X]- + [Z^T Z]+ H) )^eta.
std::pair<FactorPair, TrainReport> semi_nmf(const Matrix& x, Index k,
                                            const TrainConfig& cfg);

/// Classical two-factor multiplicative NMF; requires X >= 0.
std::pair<FactorPair, TrainReport> nmf_mul(const Matrix& x, Index k,
                                           const TrainConfig& cfg);

/// Graph-regularized NMF: nmf_mul objective plus a Laplacian smoothness
/// penalty on H. lambda = 0 reduces to nmf_mul exactly.
std::pair<FactorPair, TrainReport> gnmf(const Matrix& x, Index k,
                                        const AttributeGraph& graph,
                                        double lambda, const TrainConfig& cfg);

/// Weakly-supervised factorization:
///   minimize 0.5 ||X - Z H||_F^2 + 0.5 lambda Tr(H L H^T)  s.t. H >= 0.
/// The basis step is the same least-squares update as semi_nmf; the feature
/// update gains lambda * H W in the numerator and lambda * H D in the
/// denominator. lambda = 0 reduces to semi_nmf exactly.
std::pair<FactorPair, TrainReport> wsf(const Matrix& x, Index k,
                                       const AttributeGraph& graph,
                                       double lambda, const TrainConfig& cfg);

/// Multiple-attribute weakly-supervised factorization: one Laplacian
/// penalty per attribute graph, all applied to the single feature matrix.
std::pair<FactorPair, TrainReport> wsf_ma(
    const Matrix& x, Index k, const std::vector<AttributeGraph>& graphs,
    const std::vector<double>& lambdas, const TrainConfig& cfg);

}  // namespace dmf

#endif  // DMF_SHALLOW_HPP_
