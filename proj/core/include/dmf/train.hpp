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

#ifndef DMF_TRAIN_HPP_
#define DMF_TRAIN_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dmf/errors.hpp"

namespace dmf {

enum class InitKind {
  kAuto,        // svd_seminmf for mixed-sign bases, nndsvd for nonnegative ones
  kNndsvd,
  kSvdSemiNmf,
  kRandom,
};

struct TrainConfig {
  int max_iters = 1000;
  double kappa = 1e-6;   // stopping tolerance
  double eta = 0.5;      // exponent of the multiplicative feature update
  InitKind init = InitKind::kAuto;
  uint64_t seed = 0;
  double step = 1e-3;    // initial step size for gradient-based fine-tuning

  void validate() const {
    if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
    if (!(kappa > 0.0)) throw InvalidInput("kappa must be > 0");
    if (!(eta > 0.0) || eta > 1.0) throw InvalidInput("eta must be in (0, 1]");
    if (!(step > 0.0)) throw InvalidInput("step must be > 0");
  }
};

struct TrainReport {
  // objective_trace[0] is the objective at the initial point, followed by
  // one entry per iteration. The recorded quantity is the full cost being
  // minimized: 0.5 * squared Frobenius reconstruction error plus any
  // regularization terms.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

/// Stopping rule: E_{i-1} - E_i <= kappa * max(1, E_{i-1}).
inline bool kappa_stop(double e_prev, double e, double kappa) {
  return (e_prev - e) <= kappa * std::max(1.0, e_prev);
}

}  // namespace dmf

#endif  // DMF_TRAIN_HPP_
