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

#ifndef DMF_NUMERICS_HPP_
#define DMF_NUMERICS_HPP_

#include <utility>

#include "dmf/matrix.hpp"

namespace dmf {

/// Guard added to every denominator of a multiplicative update ratio.
inline constexpr double kDivEps = 1e-16;

/// Default relative singular-value cutoff for pseudo-inverses.
inline constexpr double kPinvRcond = 1e-12;

/// Entrywise nonnegative split of a mixed-sign matrix:
/// pos = (|A| + A)/2 and neg = (|A| - A)/2, so A = pos - neg with
/// disjoint supports.
struct SignSplit {
  Matrix pos;
  Matrix neg;
};

SignSplit pos_neg_split(const Matrix& a);

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// rcond * sigma_max are treated as zero.
Matrix pinv(const Matrix& a, double rcond = kPinvRcond);

/// Entrywise num / (den + eps) with num, den >= 0; never NaN/Inf.
Matrix safe_div(const Matrix& num, const Matrix& den);

/// Deterministic nonnegative initialization from the positive sections of a
/// truncated SVD (dense variant: zeros are refilled with 1e-4 * mean(X) so
/// multiplicative updates are not locked at zero).
std::pair<Matrix, Matrix> nndsvd_init(const Matrix& x, Index k);

/// Deterministic initialization for factorizations with a mixed-sign basis:
/// Z0 carries the leading k left singular vectors scaled by the singular
/// values, H0 the dominant nonnegative section of each right singular vector
/// renormalized to unit length (the matching Z0 column is sign-flipped when
/// the negative section dominates) plus a uniform mean shift that keeps H0
/// strictly positive.
std::pair<Matrix, Matrix> svd_seminmf_init(const Matrix& x, Index k);

}  // namespace dmf

#endif  // DMF_NUMERICS_HPP_
