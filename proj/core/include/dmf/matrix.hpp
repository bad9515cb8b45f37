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

#ifndef DMF_MATRIX_HPP_
#define DMF_MATRIX_HPP_

#include <Eigen/Dense>
#include <string>

#include "dmf/errors.hpp"

namespace dmf {

// Data matrices are dense, double precision, row-major: p feature rows by
// n sample columns. Samples are always columns.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool is_finite(const Matrix& a) { return a.allFinite(); }

inline void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  }
}

inline void require_nonneg(const Matrix& a, const char* what) {
  require_finite(a, what);
  if ((a.array() < 0.0).any()) {
    throw InvalidInput(std::string(what) + ": matrix has negative entries");
  }
}

}  // namespace dmf

#endif  // DMF_MATRIX_HPP_
